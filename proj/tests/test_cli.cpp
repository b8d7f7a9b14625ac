#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cremona/cli.hpp"
#include "cremona/json_io.hpp"

using namespace cremona;
using json_io::Json;

namespace {

struct Result {
  int status = 0;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.status = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string error_kind(const Result& r) {
  // The error object comes first; usage errors may append help text.
  auto end = r.err.find("\n}");
  return json_io::parse_text(r.err.substr(0, end + 2))["error"]["kind"].get<std::string>();
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "cremona-kit-tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("parse_invocation examples") {
  auto census = cli::parse_invocation({"orbit", "census", "--field", "F2", "--size", "4"});
  CHECK(census.path == std::vector<std::string>{"orbit", "census"});
  CHECK(census.get("field") == "F2");
  CHECK(census.get("size") == "4");
  CHECK(census.get("filter") == "both");  // default applied

  auto eval = cli::parse_invocation({"homo", "eval", "--in", "w.json"});
  CHECK(eval.path == std::vector<std::string>{"homo", "eval"});
  CHECK(eval.get("in") == "w.json");
  CHECK_FALSE(eval.has("refined"));

  auto sw = cli::parse_invocation({"homo", "eval", "--in", "w.json", "--refined", "--field", "F2"});
  CHECK(sw.get("refined") == "true");

  auto kind = [](const std::vector<std::string>& args) {
    try {
      cli::parse_invocation(args);
    } catch (const cli::UsageError& e) {
      return e.kind();
    }
    return std::string("none");
  };
  CHECK(kind({"bogus"}) == "UnknownCommand");
  CHECK(kind({"orbit", "bogus"}) == "UnknownCommand");
  CHECK(kind({"orbit", "census", "--bogus", "1"}) == "UnknownFlag");
  CHECK(kind({"word", "reduce"}) == "MissingRequired");
  CHECK(kind({"word", "reduce", "--in", "a", "stray"}) == "UnexpectedArgument");

  CHECK(cli::parse_invocation({"orbit", "census", "--help"}).help);
  CHECK(cli::parse_invocation({"orbit"}).help);
  CHECK(cli::parse_invocation({}).help);
  CHECK(cli::command_names().size() == 18);
}

TEST_CASE("every command has help") {
  for (const auto& name : cli::command_names()) {
    auto space = name.find(' ');
    auto r = run_cli({name.substr(0, space), name.substr(space + 1), "--help"});
    CHECK(r.status == 0);
    CHECK(r.out.find("--out") != std::string::npos);
  }
}

TEST_CASE("exit codes") {
  auto report = run_cli({"report", "refined", "--field", "F2", "--bound", "25"});
  CHECK(report.status == 0);
  CHECK(json_io::parse_text(report.out)["separated"] == true);

  auto push = run_cli({"linsys", "push", "--two-lambda", "2", "--two-nu", "0", "--orbit-size", "17", "--two-mult", "0"});
  CHECK(push.status == 0);
  auto pj = json_io::parse_text(push.out);
  CHECK(pj["pushed"]["two_nu"] == 34);
  CHECK(pj["pushed"]["nu"] == "17");
  CHECK(pj["oracle_agrees"] == true);

  // A single link is not a relator.
  auto fuzz = json_io::parse_text(run_cli({"word", "fuzz", "--seed", "3"}).out);
  auto w = json_io::word_from_json(fuzz["relators"][0]["word"]);
  GroupoidWord one;
  for (const auto& l : w.letters) {
    if (l.is_marker()) continue;
    one.start = l.from();
    one.end = l.to();
    one.letters = {l};
    break;
  }
  auto path = write_temp("nonrelator.json", json_io::word_to_json(one).dump());
  auto bad = run_cli({"word", "reduce", "--in", path});
  CHECK(bad.status == 1);
  CHECK(error_kind(bad) == "NotARelator");

  auto domain = run_cli({"field", "irreducible", "--field", "Q", "--poly", "5"});
  CHECK(domain.status == 1);
  CHECK(error_kind(domain) == "ConstantPolynomial");

  auto usage = run_cli({"bogus"});
  CHECK(usage.status == 2);
  CHECK(error_kind(usage) == "UnknownCommand");
  CHECK(run_cli({"linsys", "push", "--two-lambda", "x", "--two-nu", "0", "--orbit-size", "1"}).status == 2);
  CHECK(run_cli({"report", "refined", "--field", "F2", "--format", "xml"}).status == 2);
  CHECK(error_kind(run_cli({"word", "reduce", "--in", "/nonexistent/file.json"})) == "IoError");
}

TEST_CASE("census output") {
  auto r = run_cli({"orbit", "census", "--field", "F2", "--size", "1,2,4"});
  REQUIRE(r.status == 0);
  CHECK(r.out ==
        "q\tn\tfilter\torbit_count\tclass_count\n"
        "2\t1\tall\t7\t1\n"
        "2\t1\tgp\t7\t1\n"
        "2\t2\tall\t7\t1\n"
        "2\t2\tgp\t7\t1\n"
        "2\t4\tall\t63\t2\n"
        "2\t4\tgp\t42\t1\n");
}

TEST_CASE("emitted JSON round-trips through the parsers") {
  auto orbit = json_io::parse_text(run_cli({"orbit", "make", "--field", "F2", "--poly", "t^4+t+1"}).out);
  CHECK(json_io::orbit_to_json(json_io::orbit_from_json(orbit)) == orbit);
  auto split = json_io::parse_text(
      run_cli({"orbit", "make", "--field", "Q", "--poly", "x^2-2", "--template", "split", "--second", "x^2-3"}).out);
  CHECK(json_io::orbit_to_json(json_io::orbit_from_json(split)) == split);
  for (const auto& o : enumerate_point_orbits(2, 2)) {
    auto j = json_io::orbit_to_json(o);
    CHECK(json_io::orbit_to_json(json_io::orbit_from_json(j)) == j);
  }

  auto fuzz = json_io::parse_text(run_cli({"word", "fuzz", "--seed", "11", "--count", "5"}).out);
  for (const auto& item : fuzz["relators"]) {
    CHECK(json_io::word_to_json(json_io::word_from_json(item["word"])) == item["word"]);
  }

  auto dj = json_io::parse_text(run_cli({"dejonquieres", "decompose", "--field", "Q", "--poly", "y^17-2", "--conjugate"}).out);
  CHECK(json_io::word_to_json(json_io::word_from_json(dj["word"])) == dj["word"]);
  CHECK(json_io::word_to_json(json_io::word_from_json(dj["conjugated"])) == dj["conjugated"]);
  CHECK(json_io::element_to_json(json_io::element_from_json(dj["image"])) == dj["image"]);
  CHECK(dj["image_text"] == "(Hirzebruch,{17})");

  auto big = json_io::parse_text(
      run_cli({"biglink", "c5", "--field", "F2", "--orbit4", "t^4+t+1", "--rpoly", "x^17+x^3+1"}).out);
  CHECK(json_io::link_to_json(json_io::link_from_json(big["link"])) == big["link"]);
  CHECK(big["report"]["pairwise_distinct"] == true);

  auto report = json_io::parse_text(run_cli({"report", "refined", "--field", "F2", "--bound", "17"}).out);
  for (const auto& w : report["witnesses"]) {
    CHECK(json_io::word_to_json(json_io::word_from_json(w["word"])) == w["word"]);
    CHECK(json_io::element_to_json(json_io::element_from_json(w["image"])) == w["image"]);
  }

  auto push = json_io::parse_text(
      run_cli({"linsys", "push", "--two-lambda", "3", "--two-nu", "-1", "--orbit-size", "4", "--two-mult", "1"}).out);
  CHECK(json_io::linear_system_to_json(json_io::linear_system_from_json(push["pushed"])) == push["pushed"]);

  auto field = json_io::field_to_json(FieldSpec::galois(9));
  CHECK(json_io::field_from_json(field) == FieldSpec::galois(9));
  CHECK(json_io::field_from_json(Json("F4")) == FieldSpec::galois(4));
  CHECK_THROWS_WITH_AS(json_io::parse_text("{oops"), doctest::Contains("ParseError"), Error);
}

TEST_CASE("pipelines through files") {
  auto fuzz = json_io::parse_text(run_cli({"word", "fuzz", "--seed", "21"}).out);
  auto word_path = write_temp("relator.json", fuzz["relators"][0]["word"].dump());
  auto log_path = (scratch_dir() / "moves.json").string();
  auto red = run_cli({"word", "reduce", "--in", word_path, "--log", log_path, "--snapshots"});
  REQUIRE(red.status == 0);
  std::ifstream log(log_path);
  std::stringstream buf;
  buf << log.rdbuf();
  auto moves = json_io::parse_text(buf.str());
  CHECK(moves.is_array());
  for (const auto& m : moves) {
    // Every snapshot still evaluates to the identity.
    REQUIRE(m.contains("after"));
    CHECK(homo_eval(json_io::word_from_json(m["after"])).is_identity());
  }

  auto eval = run_cli({"homo", "eval", "--in", word_path});
  CHECK(json_io::parse_text(eval.out)["text"] == "1");
  CHECK(json_io::parse_text(run_cli({"word", "validate", "--in", word_path}).out)["ok"] == true);

  auto links = Json::array();
  auto big = json_io::parse_text(
      run_cli({"biglink", "c6", "--field", "F2", "--quad", "x^2+x+1", "--rpoly", "x^17+x^3+1"}).out);
  links.push_back(big["link"]);
  auto bad_link = big["link"];
  bad_link["depth"] = 3;
  links.push_back(bad_link);
  auto catalog = json_io::parse_text(run_cli({"catalog", "validate", "--in", write_temp("links.json", links.dump())}).out);
  REQUIRE(catalog.size() == 2);
  CHECK(catalog[0]["ok"] == true);
  CHECK(catalog[1]["ok"] == false);

  auto out_path = (scratch_dir() / "sym4.json").string();
  CHECK(run_cli({"audit", "sym4", "--out", out_path}).out.empty());
  CHECK(std::filesystem::file_size(out_path) > 0);
}

TEST_CASE("identical invocations give byte-identical output") {
  const std::vector<std::vector<std::string>> commands = {
      {"report", "refined", "--field", "F2", "--bound", "19"},
      {"word", "fuzz", "--seed", "5", "--count", "3", "--check"},
      {"orbit", "classify", "--field", "F2", "--size", "4", "--filter", "all"},
      {"audit", "sym4"},
      {"biglink", "c5", "--field", "F2", "--orbit4", "t^4+t+1", "--rpoly", "x^17+x^3+1", "--format", "table"},
      {"dejonquieres", "decompose", "--field", "Q", "--poly", "y^5-2", "--format", "table"},
  };
  for (const auto& c : commands) {
    auto a = run_cli(c);
    auto b = run_cli(c);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}
