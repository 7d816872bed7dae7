#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#ifndef GGM_CLI_PATH
#error "GGM_CLI_PATH must be defined"
#endif

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + GGM_CLI_PATH + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / ("ggm_cli_" + std::to_string(getpid()))) {
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("sweep --help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("generate --d").code == 2);
  CHECK(run("generate --d 7 --bogus").code == 2);
}

TEST_CASE("generate") {
  TempDir tmp;
  const auto a = tmp / "a.txt", b = tmp / "b.txt";
  CHECK(run("generate --d 7 --low 0.1 --high 0.9 --seed 1 --out " + a).code == 0);
  CHECK(run("generate --d 7 --low 0.1 --high 0.9 --seed 1 --out " + b).code == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.rfind("d=7\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
  CHECK(run("generate --d 1").code == 2);
  CHECK(run("generate --d 5 --low 0.9 --high 0.1").code == 2);
  CHECK(run("generate --d 5 --low 0 --high 0.5").code == 2);
}

TEST_CASE("seed precedence") {
  const auto flag = run("generate --d 6 --seed 5");
  const auto env = run("generate --d 6", "GGM_SEED=5");
  const auto both = run("generate --d 6 --seed 6", "GGM_SEED=5");
  const auto dflt = run("generate --d 6");
  CHECK(flag.out == env.out);
  CHECK(both.out != env.out);
  CHECK(both.out == run("generate --d 6 --seed 6").out);
  CHECK(dflt.out == run("generate --d 6 --seed 20190101").out);
  CHECK(run("generate --d 6", "GGM_SEED=abc").code == 2);
}

TEST_CASE("sample, corrupt, learn pipeline") {
  TempDir tmp;
  REQUIRE(run("generate --d 5 --low 0.5 --high 0.9 --seed 3 --out " + (tmp / "t.txt")).code == 0);
  REQUIRE(run("sample --tree " + (tmp / "t.txt") + " --n 20000 --bound 3 --seed 4 --out " +
              (tmp / "x.csv")).code == 0);
  const Result learned = run("learn --in " + (tmp / "x.csv") + " --truth " + (tmp / "t.txt"));
  CHECK(learned.code == 0);
  CHECK(learned.out.rfind("i,j,mi\n", 0) == 0);

  CHECK(run("corrupt --in " + (tmp / "x.csv") + " --channel gaussian --mean 0.1 --variance 1 --out " +
            (tmp / "g.csv")).code == 0);
  CHECK(run("learn --in " + (tmp / "g.csv") + " --sigma-sq 1").code == 0);
  CHECK(run("corrupt --in " + (tmp / "x.csv") + " --channel bsc --epsilon 0.1 --out " + (tmp / "b.csv"))
            .code == 0);
  CHECK(run("learn --in " + (tmp / "b.csv") + " --mode quantized").code == 0);
  CHECK(run("learn --in " + (tmp / "x.csv") + " --mode quantized").code == 2);
  CHECK(run("corrupt --in " + (tmp / "x.csv") + " --channel gaussian --means 0,0").code == 2);
  CHECK(run("sample --tree " + (tmp / "missing.txt") + " --n 10").code == 2);
  CHECK(run("sample --tree " + (tmp / "t.txt") + " --n 10 --bound 2").code == 2);

  std::ofstream(tmp / "inf.csv") << "1,2\ninf,0.5\n0.1,0.2\n";
  CHECK(run("learn --in " + (tmp / "inf.csv")).code == 3);
}

TEST_CASE("bound") {
  CHECK(run("bound theorem2 --d 10 --beta 0.2 --M 3 --n 200000").out == "0.0043485\n");
  CHECK(run("bound theorem2 --invert --delta 0.1 --d 10 --beta 0.2 --M 3").out == "149208\n");
  CHECK(run("bound theorem2 --d 10 --beta 0.2 --n 1620").out == "1\n");
  const Result alg = run("bound algorithmic --subtrees 6,4 --neighbors 3,2 --beta 0.2 --n 200000");
  CHECK(alg.code == 0);
  CHECK(std::stod(alg.out) == doctest::Approx(0.285 * 0.0043485).epsilon(1e-4));
  CHECK(run("bound lemma4 --rho1 0.9 --rho2 0.1 --epsilon 0.1 --n 1000").out == "0.992328\n");
  CHECK(run("bound theorem1 --d 7 --n 1000 --t 0.1 --mu1 1 --mu2 0.05 --sigma-sq 1 --rho-e 0.5 "
            "--rho-eprime 0.3").out == "1\n");
  CHECK(run("bound theorem1 --d 7 --n 1000 --t 0.1").code == 2);
  CHECK(run("bound theorem2 --d 10 --beta 0 --n 10").code == 2);
  CHECK(run("bound theorem2 --d 10 --beta 0.2 --invert").code == 2);
  CHECK(run("bound nonsense --d 10").code == 2);
}

TEST_CASE("sweep and preset-list") {
  TempDir tmp;
  const Result list = run("preset-list");
  CHECK(list.code == 0);
  for (const char* name : {"case1", "case2", "fig5", "erasure_algorithmic", "bsc_crossover", "star"})
    CHECK(list.out.find(name) != std::string::npos);

  const Result b = run("sweep --preset bsc_crossover --bounds-only");
  CHECK(b.code == 0);
  CHECK(b.out.rfind("n,empirical,stderr,lemma4\n", 0) == 0);

  CHECK(run("sweep --preset case1 --trials 20 --out " + (tmp / "c1.csv")).code == 0);
  CHECK(slurp(tmp / "c1.csv").rfind("n,empirical,stderr\n1000,", 0) == 0);
  CHECK(run("sweep --preset case1 --trials 20 --workers 1").out ==
        run("sweep --preset case1 --trials 20 --workers 2").out);

  CHECK(run("sweep --config " + (tmp / "missing.ini")).code == 2);
  std::ofstream(tmp / "bad.ini") << "[experiment]\nsweep = ten\n";
  CHECK(run("sweep --config " + (tmp / "bad.ini")).code == 2);
  std::ofstream(tmp / "ok.ini") << "[experiment]\npreset = star\ntrials = 10\nsweep = 100, 200\n";
  const Result ok = run("sweep --config " + (tmp / "ok.ini"));
  CHECK(ok.code == 0);
  CHECK(std::count(ok.out.begin(), ok.out.end(), '\n') == 3);
  CHECK(run("sweep --preset nope").code == 2);
  CHECK(run("sweep").code == 2);
}
