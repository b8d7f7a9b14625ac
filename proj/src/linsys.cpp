#include "cremona/linsys.hpp"

#include <array>

namespace cremona {
namespace {

void check_half_integer(const mpq_class& x, const std::string& what) {
  if (x.get_den() != 1 && x.get_den() != 2) fail("InvalidArgument", what + " must lie in (1/2)Z");
}

struct PushInput {
  mpq_class m;
  mpq_class r;  // orbit size
  std::string from, to;
};

PushInput prepare(const LinearSystemClass& h, const SarkisovLink& link) {
  if (!link.is_conic_bundle_type2()) fail("InvalidLink", "pushforward needs a type II link between conic bundles");
  auto v = link_validate(link);
  if (!v.ok) fail("InvalidLink", v.rule + ": " + v.detail);
  PushInput in;
  in.from = link.orbit_src->label;
  in.to = link.orbit_tgt->label;
  in.r = link.orbit_src->size;
  in.m = h.multiplicity(in.from);
  if (in.m < 0 || in.m > h.lambda() * 2) {
    fail("MultiplicityOutOfRange", "multiplicity " + in.m.get_str() + " outside [0, 2 lambda]");
  }
  return in;
}

LinearSystemClass assemble(const LinearSystemClass& h, const PushInput& in, const mpq_class& lambda,
                           const mpq_class& nu, const mpq_class& m_new) {
  mpq_class two_l = lambda * 2, two_n = nu * 2;
  if (two_l.get_den() != 1 || two_n.get_den() != 1) fail("InvalidArgument", "pushed class left (1/2)Z");
  LinearSystemClass out;
  out.two_lambda = two_l.get_num().get_si();
  out.two_nu = two_n.get_num().get_si();
  out.multiplicities = h.multiplicities;
  out.multiplicities.erase(in.from);
  if (m_new != 0) out.multiplicities[in.to] = m_new;
  return out;
}

}  // namespace

mpq_class LinearSystemClass::multiplicity(const std::string& orbit) const {
  auto it = multiplicities.find(orbit);
  return it == multiplicities.end() ? mpq_class(0) : it->second;
}

LinearSystemClass make_linear_system(long two_lambda, long two_nu,
                                     std::map<std::string, mpq_class> multiplicities) {
  if (two_lambda < 0) fail("InvalidArgument", "lambda must be nonnegative");
  LinearSystemClass h;
  h.two_lambda = two_lambda;
  h.two_nu = two_nu;
  for (auto& [k, m] : multiplicities) {
    m.canonicalize();
    check_half_integer(m, "multiplicity");
    if (m < 0 || m > mpq_class(two_lambda)) fail("MultiplicityOutOfRange", "multiplicity of " + k + " outside [0, 2 lambda]");
    if (m != 0) h.multiplicities[k] = m;
  }
  return h;
}

LinearSystemClass push_type2(const LinearSystemClass& h, const SarkisovLink& link) {
  PushInput in = prepare(h, link);
  // 2nu' = 2nu + r (2 lambda - 2m); m' = 2 lambda - m.
  mpq_class two_nu = mpq_class(h.two_nu) + in.r * (mpq_class(h.two_lambda) - 2 * in.m);
  return assemble(h, in, h.lambda(), two_nu / 2, h.lambda() * 2 - in.m);
}

LinearSystemClass push_oracle(const LinearSystemClass& h, const SarkisovLink& link) {
  PushInput in = prepare(h, link);
  // Coordinates on the common blow-up in the basis (K_S, fiber, E_src, E_tgt).
  using Vec = std::array<mpq_class, 4>;
  const Vec pull_k = {1, 0, -1, 0};  // pullback of K from the source: K_S - E_src
  const Vec pull_f = {0, 1, 0, 0};
  Vec lifted;
  for (int i = 0; i < 4; ++i) lifted[i] = -h.lambda() * pull_k[i] + h.nu() * pull_f[i];
  lifted[2] -= in.m;  // strict transform loses m E_src
  // Each transformed fiber splits: E_src = r f - E_tgt.
  Vec v = lifted;
  v[1] += in.r * v[2];
  v[3] -= v[2];
  v[2] = 0;
  // Solve -l (K_S - E_tgt) + n f - m' E_tgt = v for (l, n, m') by elimination.
  std::array<std::array<mpq_class, 4>, 3> a = {{
      {-1, 0, 0, v[0]},  // K_S coefficient
      {0, 1, 0, v[1]},   // fiber coefficient
      {1, 0, -1, v[3]},  // E_tgt coefficient
  }};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    while (a[piv][col] == 0) ++piv;
    std::swap(a[piv], a[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col || a[r][col] == 0) continue;
      mpq_class f = a[r][col] / a[col][col];
      for (int c = 0; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  mpq_class lambda = a[0][3] / a[0][0], nu = a[1][3] / a[1][1], m_new = a[2][3] / a[2][2];
  return assemble(h, in, lambda, nu, m_new);
}

SarkisovLink grid_link(unsigned orbit_size) {
  SarkisovLink l;
  l.type = LinkType::II;
  l.source = hirzebruch(0);
  l.target = hirzebruch(orbit_size % 2);
  l.orbit_src = BaseOrbit{orbit_size, "w_src", std::nullopt};
  l.orbit_tgt = BaseOrbit{orbit_size, "w_tgt", std::nullopt};
  l.depth = orbit_size;
  return l;
}

GrowthResult lambda_bound(const mpq_class& lambda, const std::vector<LargeOrbit>& orbits, const mpq_class& a_lower,
                          unsigned big_delta, const mpq_class& small_delta) {
  if (lambda <= 0) fail("NonpositiveLambda", "lambda must be positive");
  GrowthResult r;
  if (a_lower < mpq_class(1, 2)) {
    r.failure = "a_lower < 1/2";
    return r;
  }
  if (orbits.empty()) {
    r.failure = "no orbit of size >= " + std::to_string(big_delta);
    return r;
  }
  mpq_class beta = 0;
  for (const auto& o : orbits) {
    if (o.size < big_delta) {
      r.failure = "orbit size " + std::to_string(o.size) + " < " + std::to_string(big_delta);
      return r;
    }
    if (o.multiplicity < 0) {
      r.failure = "negative multiplicity";
      return r;
    }
    if (o.multiplicity >= small_delta * lambda) {
      r.failure = "m_omega >= delta*lambda";
      return r;
    }
    beta += mpq_class(o.size) * (1 - o.multiplicity / lambda);
  }
  GrowthCertificate c;
  c.lambda_in = lambda;
  c.beta = beta;
  c.a_lower = a_lower;
  c.bound = a_lower * beta * lambda;
  c.exceeds_four_lambda = c.bound > 4 * lambda;
  r.certificate = c;
  return r;
}

}  // namespace cremona
