#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(REFPARSE_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("version") {
  const Run r = run("--version");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("refparse 1.0.0", 0) == 0);
}

TEST_CASE("tokenize") {
  const Run r = run("tokenize 'vol. 18'");
  CHECK(r.status == 0);
  CHECK(r.out == "ALPHA\tvol\nOTHER\t.\nDIGIT\t18\n");
}

TEST_CASE("generate, parse, evaluate, align, train") {
  const fs::path d = fs::temp_directory_path() / "refparse_cli";
  fs::remove_all(d);
  fs::create_directories(d);
  const std::string p = (d / "c").string();

  REQUIRE(run("generate --n 120 --noise-p 0.01 --seed 3 --out-prefix " + p).status == 0);
  CHECK(lines(slurp(p + ".txt")) == 120);
  CHECK(lines(slurp(p + ".jsonl")) == 120);

  REQUIRE(run("parse --engine rules --in " + p + ".txt --out " + (d / "rules.jsonl").string()).status == 0);
  CHECK(lines(slurp(d / "rules.jsonl")) == 120);

  const Run ev = run("evaluate --pred " + (d / "rules.jsonl").string() + " --truth " + p +
                     ".jsonl --report " + (d / "report.tsv").string());
  CHECK(ev.status == 0);
  CHECK(ev.out.find("overall") != std::string::npos);
  CHECK(slurp(d / "report.tsv").find("overall_macro") != std::string::npos);

  const Run al = run("align --strings " + p + ".txt --truth " + p + ".fields.jsonl");
  CHECK(al.status == 0);
  CHECK(al.out.rfind("string_index\ttruth_index\tsimilarity\n", 0) == 0);
  CHECK(lines(al.out) == 121);

  REQUIRE(run("train --corpus " + p + ".xml --epochs 5 --out " + (d / "m.json").string()).status == 0);
  REQUIRE(run("parse --engine crf --model " + (d / "m.json").string() + " --in " + p + ".txt --out " +
              (d / "crf.jsonl").string())
              .status == 0);
  CHECK(lines(slurp(d / "crf.jsonl")) == 120);

  // Same seed, same bytes.
  REQUIRE(run("generate --n 120 --noise-p 0.01 --seed 3 --out-prefix " + p + "2").status == 0);
  CHECK(slurp(p + ".xml") == slurp(p + "2.xml"));
}

TEST_CASE("errors exit non-zero") {
  CHECK(run("parse --engine crf --in /dev/null").status != 0);
  CHECK(run("parse --engine crf --model /nonexistent --in /dev/null").status != 0);
  CHECK(run("evaluate --pred /nonexistent --truth /nonexistent").status != 0);
  CHECK(run("generate --n 3 --styles nosuchstyle --out-prefix /tmp/refparse_cli_x").status != 0);
  CHECK(run("frobnicate").status != 0);
}
