#include "support.hpp"

#include "nsgal/experiment.hpp"
#include "nsgal/io.hpp"
#include "nsgal/plots.hpp"

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

using namespace nsgal;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("nsgal_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

int run_text(const std::string& text, const fs::path& out, RunOptions options = {}) {
  std::istringstream in(text);
  std::ostringstream log;
  return run_experiment(parse_config(in), out, options, log);
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string kTaylorGreen =
    "command = nse\nnu = 1\nT = 1\ndt = 1e-3\ncutoff = 2\ndata = taylor-green\n";

}  // namespace

TEST_CASE("shortest round-trip number formatting") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 4.9e-324, -0.0, 123456789.125, -2.5e17}) {
    const auto s = format_double(x);
    double back = 1.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
    CHECK(std::signbit(back) == std::signbit(x));
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("field CSV round trip is byte identical") {
  for (int K : {1, 2, 3}) {
    const auto m = ModeSet::with_cutoff(K);
    for (const auto& u : {random_field(m, 5, 1.0), taylor_green(m, 0.3), SpectralField(m)}) {
      std::ostringstream first;
      write_field_csv(first, u);
      std::istringstream in(first.str());
      const auto back = read_field_csv(in);
      CHECK(back == u);
      CHECK(back.cutoff() == K);
      std::ostringstream second;
      write_field_csv(second, back);
      CHECK(second.str() == first.str());
    }
  }
}

TEST_CASE("field CSV reader validates its input") {
  const auto m = ModeSet::with_cutoff(1);
  std::ostringstream good;
  write_field_csv(good, random_field(m, 1, 1.0));
  const std::string text = good.str();
  auto read = [](const std::string& s) {
    std::istringstream in(s);
    return read_field_csv(in);
  };
  CHECK_NOTHROW(read(text));
  CHECK_THROWS_AS(read("kx,ky,kz\n"), DataIntegrityError);
  CHECK_THROWS_AS(read("kx,ky,kz,re1,im1,re2,im2,re3,im3\n"), DataIntegrityError);

  std::istringstream ss(text);
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(ss, line)) rows.push_back(line);
  auto join = [](const std::vector<std::string>& r) {
    std::string s;
    for (const auto& l : r) s += l + "\n";
    return s;
  };
  SUBCASE("swapped rows") {
    auto r = rows;
    std::swap(r[1], r[2]);
    CHECK_THROWS_AS(read(join(r)), DataIntegrityError);
  }
  SUBCASE("missing row") {
    auto r = rows;
    r.pop_back();
    CHECK_THROWS_AS(read(join(r)), DataIntegrityError);
  }
  SUBCASE("short row") {
    auto r = rows;
    r[3] = "1,0,0,0.5";
    CHECK_THROWS_AS(read(join(r)), DataIntegrityError);
  }
  SUBCASE("non-numeric entry") {
    auto r = rows;
    r[3].replace(r[3].rfind(','), std::string::npos, ",abc");
    CHECK_THROWS_AS(read(join(r)), DataIntegrityError);
  }
  SUBCASE("broken reality symmetry") {
    auto r = rows;
    r[1].replace(r[1].rfind(','), std::string::npos, ",12.5");
    CHECK_THROWS_AS(read(join(r)), DataIntegrityError);
  }
}

TEST_CASE("config parsing") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_config(in);
  };
  const auto c = parse(kTaylorGreen + "# comment\nintegrator = etd2  # trailing\nsnapshot_stride = 10\n");
  CHECK(c.command == Command::nse);
  CHECK(c.solver.integrator == Integrator::etd2);
  CHECK(c.data.preset == "taylor-green");
  CHECK(c.snapshot_stride == 10);
  const auto s = parse("command = sweep\nnu=1\nT=1\ndt=0.01\ncutoff=2\nlambdas = 0, 0.5, 1\nmode = 1,2,0\n");
  CHECK(s.lambdas == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(s.data.mode == Wavevector(1, 2, 0));

  CHECK_THROWS_AS(parse("command = nse\nT = 1\ndt = 1e-3\ncutoff = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse(kTaylorGreen + "colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(parse(kTaylorGreen + "nu = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse(kTaylorGreen + "seed = x\n"), ConfigError);
  CHECK_THROWS_AS(parse(kTaylorGreen + "forcing = lava\n"), ConfigError);
  CHECK_THROWS_AS(parse("command = dance\nnu=1\nT=1\ndt=1e-3\ncutoff=2\n"), ConfigError);
  CHECK_THROWS_AS(parse("command = nse\nnu=-1\nT=1\ndt=1e-3\ncutoff=2\n"), ConfigError);
  CHECK_THROWS_AS(parse(kTaylorGreen + "no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse("command = sweep\nnu=1\nT=1\ndt=0.01\ncutoff=2\nlambdas = 0.2, 1\n"), ConfigError);
}

TEST_CASE("nse run writes a taylor-green trace matching exp(-2 nu t)") {
  TempDir tmp;
  const auto out = tmp.path / "tg";
  CHECK(run_text(kTaylorGreen, out) == exit_code::success);
  for (const char* f : {"meta.json", "norms.csv", "initial.csv", "verification.json", "snapshots/field_000000.csv",
                        "snapshots/field_001000.csv"})
    CHECK(fs::exists(out / f));
  const auto rows = read_csv(out / "norms.csv");
  REQUIRE(rows.size() == 1002);
  CHECK(rows[0] == std::vector<std::string>{"t", "norm_H", "norm_V", "norm_DA", "norm_L4", "int_V2", "int_f_y",
                                            "int_L4_8"});
  double worst = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t = std::stod(rows[i][0]);
    worst = std::max(worst, std::abs(std::stod(rows[i][1]) - std::exp(-2.0 * t) * std::sqrt(0.5)));
  }
  CHECK(worst <= 1e-6);
  const auto meta = nlohmann::json::parse(slurp(out / "meta.json"));
  CHECK(meta["exit_status"] == "completed");
  CHECK(meta["config"]["nu"] == 1.0);
  CHECK(!fs::exists(out / ".nsgal.lock"));
  const auto last = read_field_csv(out / "snapshots/field_001000.csv");
  CHECK(norm_H(last) == doctest::Approx(std::exp(-2.0) * std::sqrt(0.5)).epsilon(1e-10));
}

TEST_CASE("sweep run on zero data") {
  TempDir tmp;
  const auto out = tmp.path / "sweep";
  CHECK(run_text("command = sweep\nnu=1\nT=1\ndt=1e-2\ncutoff=2\ndata = random\namplitude = 0\n", out) == 0);
  const auto rows = read_csv(out / "sweep.csv");
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == std::vector<std::string>{"lambda", "status", "t_star", "serrin", "sup_V"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][1] == "converged");
    CHECK(rows[i][3] == "0");
  }
  const auto report = nlohmann::json::parse(slurp(out / "sweep.json"));
  CHECK(report["verdict"] == "all-solved-bounded");
  CHECK(fs::exists(out / "meta.json"));
}

TEST_CASE("exit codes") {
  TempDir tmp;
  SUBCASE("blow-up") {
    const auto out = tmp.path / "blow";
    CHECK(run_text(kTaylorGreen + "blowup_threshold = 0.5\n", out) == exit_code::blow_up);
    const auto meta = nlohmann::json::parse(slurp(out / "meta.json"));
    CHECK(meta["exit_status"] == "blow_up");
    CHECK(meta["t_star"] == 0.0);
  }
  SUBCASE("non-convergence") {
    const auto out = tmp.path / "fp";
    const std::string cfg =
        "command = fixed-point\nnu=1\nT=1\ndt=1e-2\ncutoff=2\ndata=random\namplitude=0.1\nmax_iter=1\ntol=1e-14\n";
    CHECK(run_text(cfg, out) == exit_code::non_convergence);
    const auto log = nlohmann::json::parse(slurp(out / "fixed_point.json"));
    CHECK(log["converged"] == false);
    CHECK(log["distances"].size() == 1);
  }
  SUBCASE("strict mapping of failed checks") {
    const std::string cfg = "command = fixed-point\nnu=1\nT=1\ndt=1e-2\ncutoff=2\ndata=random\namplitude=0.1\n"
                            "tol=1e-12\nmatch_tol=1e-300\n";
    CHECK(run_text(cfg, tmp.path / "lenient") == exit_code::success);
    RunOptions strict;
    strict.strict = true;
    CHECK(run_text(cfg, tmp.path / "strict", strict) == exit_code::check_failed);
    const auto v = nlohmann::json::parse(slurp(tmp.path / "strict" / "verification.json"));
    CHECK(v["fixed_point"]["summary"]["passed"] == false);
  }
  SUBCASE("locked output directory") {
    const auto out = tmp.path / "locked";
    fs::create_directories(out);
    std::ofstream(out / ".nsgal.lock") << "";
    CHECK(run_text(kTaylorGreen, out) == exit_code::config_error);
    CHECK(!fs::exists(out / "norms.csv"));
  }
  SUBCASE("single mode outside the cutoff is rejected before any output") {
    const auto out = tmp.path / "bad_mode";
    CHECK(run_text("command = nse\nnu=1\nT=1\ndt=1e-2\ncutoff=2\ndata = single-mode\nmode = 3,0,0\n", out) ==
          exit_code::config_error);
    CHECK(!fs::exists(out));
  }
}

TEST_CASE("every command runs") {
  TempDir tmp;
  const std::string base = "nu=1\nT=0.2\ndt=1e-2\ncutoff=2\ndata=random\namplitude=0.2\nsamples=50\n";
  CHECK(run_text("command = controlled\ncontrol = random\ncontrol_amplitude = 1\n" + base, tmp.path / "c") == 0);
  CHECK(fs::exists(tmp.path / "c" / "verification.json"));
  CHECK(fs::exists(tmp.path / "c" / "constants.json"));
  CHECK(run_text("command = perturb\nperturbation = random\nperturbation_amplitude = 0.01\n" + base,
                 tmp.path / "p") == 0);
  CHECK(fs::exists(tmp.path / "p" / "perturbation" / "norms.csv"));
  CHECK(fs::exists(tmp.path / "p" / "stability.json"));
  CHECK(run_text("command = constants\n" + base, tmp.path / "k") == 0);
  const auto k = nlohmann::json::parse(slurp(tmp.path / "k" / "constants.json"));
  for (const char* key : {"c_b1", "c_b2", "c", "c1", "c2", "samples", "seed"}) CHECK(k.contains(key));
  CHECK(run_text("command = check\nforcing = steady\n" + base, tmp.path / "x") == 0);
  const auto v = nlohmann::json::parse(slurp(tmp.path / "x" / "verification.json"));
  CHECK(v["uniqueness"]["summary"]["passed"] == true);
  CHECK(v["energy_inequality"]["checks"][0]["name"] == "energy_inequality");
}

TEST_CASE("runs are reproducible") {
  TempDir tmp;
  const std::string cfg = "command = nse\nnu=0.3\nT=0.5\ndt=1e-3\ncutoff=2\ndata=random\nseed=9\namplitude=2\n"
                          "forcing=random\nforcing_seed=4\nsnapshot_stride=50\n";
  REQUIRE(run_text(cfg, tmp.path / "a") == 0);
  REQUIRE(run_text(cfg, tmp.path / "b") == 0);
  CHECK(slurp(tmp.path / "a" / "norms.csv") == slurp(tmp.path / "b" / "norms.csv"));
  for (const auto& entry : fs::directory_iterator(tmp.path / "a" / "snapshots")) {
    CHECK(slurp(entry.path()) == slurp(tmp.path / "b" / "snapshots" / entry.path().filename()));
  }
}

TEST_CASE("plots") {
  TempDir tmp;
  std::ostringstream log;
  SUBCASE("taylor-green norm traces") {
    const auto out = tmp.path / "tg";
    REQUIRE(run_text(kTaylorGreen, out) == 0);
    CHECK(emit_plots(out, log) == 0);
    const auto svg = slurp(out / "norm_H.svg");
    CHECK(svg.find(slurp(out / "norms.csv")) != std::string::npos);
    std::vector<double> ys;
    for (std::size_t pos = svg.find("data-y=\""); pos != std::string::npos; pos = svg.find("data-y=\"", pos + 1)) {
      const auto start = pos + 8;
      ys.push_back(std::stod(svg.substr(start, svg.find('"', start) - start)));
    }
    REQUIRE(ys.size() == 1001);
    for (std::size_t i = 1; i < ys.size(); ++i) CHECK(ys[i] < ys[i - 1]);
    CHECK(fs::exists(out / "norm_V.svg"));
  }
  SUBCASE("sweep with a blow-up member") {
    const auto out = tmp.path / "sw";
    REQUIRE(run_text("command = sweep\nnu=1\nT=1\ndt=1e-2\ncutoff=2\ndata=taylor-green\nblowup_threshold=0.5\n"
                     "lambda_points=3\n",
                     out) == 0);
    CHECK(emit_plots(out, log) == 0);
    const auto svg = slurp(out / "sweep_serrin.svg");
    CHECK(svg.find("blow-up at lambda 1") != std::string::npos);
    CHECK(svg.find("blow-up at lambda 0.5") == std::string::npos);
  }
  SUBCASE("empty sweep grid") {
    std::ofstream(tmp.path / "sweep.csv") << "lambda,status,t_star,serrin,sup_V\n";
    CHECK(emit_plots(tmp.path, log) == 0);
    CHECK(log.str().find("warning") != std::string::npos);
    CHECK(!fs::exists(tmp.path / "sweep_serrin.svg"));
  }
  SUBCASE("missing inputs") {
    CHECK(emit_plots(tmp.path / "nothing", log) == 1);
  }
}

TEST_CASE("command-line interface") {
  TempDir tmp;
  const std::string cli = NSGAL_CLI;
  const auto good = write_config(tmp.path, "tg.cfg", kTaylorGreen);
  const auto bad = write_config(tmp.path, "bad.cfg", "command = nse\nT = 1\ndt = 1e-3\ncutoff = 2\n");
  CHECK(shell(cli + " run --config " + good.string() + " --out-dir " + (tmp.path / "ok").string()) == 0);
  CHECK(shell(cli + " plot --run-dir " + (tmp.path / "ok").string()) == 0);
  CHECK(fs::exists(tmp.path / "ok" / "norm_H.svg"));
  CHECK(shell(cli + " run --config " + bad.string() + " --out-dir " + (tmp.path / "bad").string()) == 1);
  CHECK(!fs::exists(tmp.path / "bad"));
  CHECK(shell(cli + " run --config " + good.string()) == 1);
  CHECK(shell(cli + " plot --run-dir " + (tmp.path / "none").string()) == 1);
  CHECK(shell(cli + " run --config " + good.string() + " --out-dir " + (tmp.path / "t").string() + " --threads 0") ==
        1);
}
