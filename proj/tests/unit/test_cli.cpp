#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "pcanon/errors.hpp"

using namespace pcanon;
using namespace pcanon::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pcanon");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("pcanon-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("tilt example") {
  JobSpec s;
  s.command = "tilt";
  s.type = "SL2";
  s.prime = 3;
  s.weight_bound = 4;
  Table t = run_command(s);
  REQUIRE(t.rows.size() == 3);
  // w, lambda, dim_T, y, mu, multiplicity, dim_nabla
  CHECK(t.rows[1] == std::vector<std::string>{"s0", "4", "6", "s0", "4", "1", "5"});
  CHECK(t.rows[2] == std::vector<std::string>{"s0", "4", "6", "e", "0", "1", "1"});
}

TEST_CASE("kl example: b of the longest element in A2") {
  JobSpec s;
  s.command = "kl";
  s.type = "A2";
  s.max_length = 3;
  Table t = run_command(s);
  size_t seen = 0;
  for (const auto& r : t.rows) {
    if (r[0] != "s1,s2,s1") continue;
    size_t len = r[1] == "e" ? 0 : std::count(r[1].begin(), r[1].end(), ',') + 1;
    std::string expect = len == 3 ? "1" : len == 2 ? "v" : "v^" + std::to_string(3 - len);
    CHECK(r[2] == expect);
    ++seen;
  }
  CHECK(seen == 6);
}

TEST_CASE("pairing example") {
  Run r = run({"pairing", "--type", "A2", "--left", "s1", "--right", "s1", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == "left,right,pairing\ns1,s1,1+v^2\n");
  r = run({"pairing", "--type", "A2", "--left", "s1,s2", "--right", "s1,s2", "--method", "both", "--format", "csv"});
  CHECK(r.out == "left,right,pairing,hom_rank\n\"s1,s2\",\"s1,s2\",1+2*v^2+v^4,1+2*v^2+v^4\n");
}

TEST_CASE("JSON round trip") {
  for (const char* cmd : {"kl", "pkl", "antispherical", "tilt", "pairing"}) {
    JobSpec s;
    s.command = cmd;
    s.type = std::string(cmd) == "tilt" ? "SL2" : std::string(cmd) == "antispherical" ? "A1~" : "B2";
    s.prime = std::string(cmd) == "tilt" ? 5 : 2;
    s.max_length = 3;
    s.weight_bound = 20;
    Table t = run_command(s);
    Table back = Table::from_json(nlohmann::json::parse(render(t, Format::Json)));
    CHECK(back == t);
  }
  CHECK_THROWS_AS(Table::from_json(nlohmann::json::parse(R"({"command": "kl"})")), InputError);
}

TEST_CASE("exit codes") {
  CHECK(run({"kl", "--type", "A2", "--max-length", "2"}).code == 0);
  CHECK(run({"kl", "--type", "Q2"}).code == 1);
  CHECK(run({"kl"}).code == 1);
  CHECK(run({"nonsense"}).code == 1);
  CHECK(run({"pkl", "--type", "B2", "--prime", "4"}).code == 1);
  CHECK(run({"kl", "--type", "A2", "--max-length", "0"}).code == 1);
  CHECK(run({"tilt", "--type", "SL3", "--prime", "3"}).code == 1);
  CHECK(run({"antispherical", "--type", "A2", "--max-length", "2"}).code == 1);
  CHECK(run({"kl", "--type", "A2", "--gcm-file", "x.json"}).code == 1);
  // Enumeration beyond the element cap is a resource error.
  CHECK(run({"kl", "--type", "A3~", "--max-length", "400"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("GCM file, ordering and environment") {
  fs::path dir = fresh_dir("gcm");
  fs::create_directories(dir);
  std::ofstream(dir / "b2.json") << R"({"matrix": [[2, -1], [-2, 2]], "labels": ["s1", "s2"]})";
  Run a = run({"kl", "--gcm-file", (dir / "b2.json").string(), "--max-length", "4", "--format", "csv"});
  Run b = run({"kl", "--type", "B2", "--max-length", "4", "--format", "csv"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  Run swapped = run({"kl", "--type", "A2", "--max-length", "1", "--seed-order", "s2,s1", "--format", "csv"});
  CHECK(swapped.out == "w,y,h_yw\ne,e,1\ns2,e,v\ns2,s2,1\ns1,e,v\ns1,s1,1\n");
  CHECK(run({"kl", "--type", "A2", "--seed-order", "s2"}).code == 1);

  ::setenv("PCANON_TYPE", "A2", 1);
  ::setenv("PCANON_FORMAT", "csv", 1);
  Run env = run({"kl", "--max-length", "1"});
  ::unsetenv("PCANON_TYPE");
  ::unsetenv("PCANON_FORMAT");
  CHECK(env.code == 0);
  CHECK(env.out == "w,y,h_yw\ne,e,1\ns1,e,v\ns1,s1,1\ns2,e,v\ns2,s2,1\n");
  fs::remove_all(dir);
}

TEST_CASE("cache coherence") {
  fs::path dir = fresh_dir("cache");
  std::vector<std::string> args{"antispherical", "--type", "A1~", "--prime", "3", "--max-length", "5",
                                "--format", "json", "--cache-dir", dir.string()};
  Run first = run(args);
  REQUIRE(first.code == 0);
  size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    CHECK(e.path().extension() == ".json");
    ++files;
  }
  CHECK(files == 1);
  Run cached = run(args);
  CHECK(cached.out == first.out);
  std::vector<std::string> uncached(args.begin(), args.end() - 2);
  CHECK(run(uncached).out == first.out);

  // Entries from another algorithm version or with garbage are ignored.
  fs::path entry = fs::directory_iterator(dir)->path();
  nlohmann::json j = nlohmann::json::parse(std::ifstream(entry));
  j["algorithm_version"] = kAlgorithmVersion + 1;
  j["table"]["rows"] = nlohmann::json::array();
  std::ofstream(entry) << j.dump();
  CHECK(run(args).out == first.out);
  std::ofstream(entry) << "{not json";
  CHECK(run(args).out == first.out);

  fs::remove_all(dir);
  CHECK(run(args).out == first.out);
  fs::remove_all(dir);
}

TEST_CASE("formats") {
  JobSpec s;
  s.command = "antispherical";
  s.type = "A1~";
  s.max_length = 2;
  Table t = run_command(s);
  CHECK(render(t, Format::Csv) == "w,y,n_yw\ne,e,1\ns0,e,v\ns0,s0,1\n\"s0,s1\",s0,v\n\"s0,s1\",\"s0,s1\",1\n");
  std::string text = render(t, Format::Text);
  CHECK(text.rfind("w      y      n_yw\n-----  -----  ----\ne      e      1\n", 0) == 0);
}

TEST_CASE("selftest") {
  Run r = run({"selftest", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
