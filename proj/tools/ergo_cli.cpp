// Command-line front end: metrics, independence, conjugate, towers, run.
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ergo/harness.hpp"
#include "ergo/towers.hpp"

namespace {

using namespace ergo;

int cmd_metrics(const std::string& map_a, const std::string& map_b,
                const std::string& basis_path, std::int64_t window) {
  GridMap p = gridmap_from_json(Json::parse(read_file(map_a)));
  GridMap r = gridmap_from_json(Json::parse(read_file(map_b)));
  Basis basis = basis_path.empty() ? Basis::dyadic(p.resolution())
                                   : basis_from_json(Json::parse(read_file(basis_path)));
  std::cout << "d,a,tau_W,W\n"
            << rational_str(metric_d(p, r, basis)) << ','
            << rational_str(metric_a(p, r, basis)) << ','
            << rational_str(metric_tau(p, r, basis, window)) << ',' << window << "\n";
  return 0;
}

int cmd_independence(unsigned log2n, const std::string& map_path, std::int64_t window,
                     const std::string& delta_str, std::uint64_t seed, unsigned trials,
                     const std::string& out_path) {
  GridMap s = map_path.empty()
                  ? GridMap::scrambler(1u << log2n)
                  : gridmap_from_json(Json::parse(read_file(map_path)));
  Rational delta = parse_rational(delta_str);
  HalfSetSearch res = find_half_measure_independent_set(s, window, delta, seed, trials);
  Json j{{"success", res.success},
         {"trials_used", res.trials_used},
         {"window", window},
         {"delta_target", rational_str(delta)},
         {"achieved", rational_str(res.report.deviation)},
         {"report", to_json(res.report)},
         {"set_size", res.set.size()}};
  std::string text = canonical_dump(j);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return res.success ? 0 : 1;
}

int cmd_conjugate(const std::string& eps_str, unsigned k, std::int64_t window,
                  unsigned log2n, std::uint64_t seed, unsigned trials,
                  const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.resolution_log2 = log2n;
  cfg.k = k;
  cfg.epsilon = parse_rational(eps_str);
  cfg.window = window;
  cfg.seed = seed;
  cfg.trials = trials;
  cfg.output_dir = out_dir;
  cfg.validate();
  RunRecord rec = run_experiment(cfg);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir + "/certificate.json", canonical_dump(rec.record.at("certificate")));
  write_file(out_dir + "/deviations.csv", deviation_table_csv(rec.certificate));
  std::cout << (rec.certificate.pass ? "pass" : "fail") << " max_deviation="
            << rational_str(rec.certificate.max_deviation) << " bound="
            << rational_str(rec.certificate.bound) << "\n";
  return rec.certificate.pass && rec.certificate.decomposition_ok ? 0 : 1;
}

int cmd_towers(unsigned log2n, std::int64_t height, unsigned k,
               const std::string& sets_path, std::uint64_t perturb_seed,
               const std::string& out_path) {
  const std::uint32_t n = 1u << log2n;
  GridMap s = GridMap::cyclic_shift(n);
  Tower tower = build_tower(s, height);
  std::vector<CellSet> sets;
  if (sets_path.empty()) {
    // Default test sets: bottom level and the lower half of the levels.
    sets.push_back(tower.levels.front());
    CellSet lower = CellSet::empty(n);
    for (std::int64_t i = 0; i < height / 2; ++i)
      lower = unite(lower, tower.levels[static_cast<std::size_t>(i)]);
    sets.push_back(lower);
  } else {
    for (const auto& j : Json::parse(read_file(sets_path))) sets.push_back(cellset_from_json(j));
  }
  CounterRng rng = CounterRng::derive(perturb_seed, 0);
  std::uint32_t x = static_cast<std::uint32_t>(rng.next_below(n));
  std::uint32_t y = static_cast<std::uint32_t>(rng.next_below(n));
  GridMap v = x == y ? s : s.with_swapped_images(x, y);
  OpennessCertificate cert = openness_certificate(s, tower, k, sets, v);
  std::string text = canonical_dump(to_json(cert));
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return cert.pass ? 0 : 1;
}

int cmd_run(const std::string& config_path) {
  ExperimentConfig cfg = config_from_json(Json::parse(read_file(config_path)));
  if (const char* env = std::getenv("ERGO_OUTPUT_DIR")) cfg.output_dir = env;
  RunRecord rec = run_experiment(cfg);
  emit_reports(rec, cfg.output_dir);
  for (const auto& [name, value] : rec.record.at("verdicts").items())
    std::cout << name << ": " << (value.get<bool>() ? "pass" : "fail") << "\n";
  std::cout << "record: " << cfg.output_dir << "/record.json\n";
  return rec.overall_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-arithmetic workbench for mixing transformations"};
  app.require_subcommand(1);

  auto* metrics = app.add_subcommand("metrics", "d, a and tau_W between two grid maps");
  std::string map_a, map_b, basis_path;
  std::int64_t window = 4;
  metrics->add_option("--map-a", map_a, "GridMap JSON file")->required();
  metrics->add_option("--map-b", map_b, "GridMap JSON file")->required();
  metrics->add_option("--basis", basis_path, "Basis JSON file (default: dyadic)");
  metrics->add_option("--window,-W", window, "power window for tau");

  auto* indep = app.add_subcommand("independence",
                                   "search for a half-measure set with almost independent images");
  unsigned log2n = 12, trials = 64;
  std::string map_path, delta_str = "1/100", out_path;
  std::uint64_t seed = 1;
  std::int64_t iwindow = 2;
  indep->add_option("--resolution-log2", log2n, "grid resolution 2^L");
  indep->add_option("--map", map_path, "GridMap JSON file (default: scrambler)");
  indep->add_option("--window", iwindow, "image window M");
  indep->add_option("--delta", delta_str, "target deviation, p/q");
  indep->add_option("--seed", seed, "RNG seed");
  indep->add_option("--trials", trials, "search trials");
  indep->add_option("--out", out_path, "write report JSON here (default: stdout)");

  auto* conj = app.add_subcommand("conjugate", "build V = Q^-1 S Q and its certificate");
  std::string eps_str = "1/2", out_dir = "out";
  unsigned ck = 0, clog2n = 14, ctrials = 64;
  std::int64_t cwindow = 3;
  std::uint64_t cseed = 1;
  conj->add_option("--epsilon", eps_str, "neighborhood radius, p/q");
  conj->add_option("--k", ck, "atom rank");
  conj->add_option("--window,-W", cwindow, "power window W");
  conj->add_option("--resolution-log2", clog2n, "grid resolution 2^L");
  conj->add_option("--seed", cseed, "RNG seed");
  conj->add_option("--trials", ctrials, "independence search trials");
  conj->add_option("--out", out_dir, "output directory");

  auto* tow = app.add_subcommand("towers", "Rokhlin tower openness certificate");
  unsigned tlog2n = 12, tk = 2;
  std::int64_t theight = 8;
  std::string sets_path, tout;
  std::uint64_t perturb = 1;
  tow->add_option("--resolution-log2", tlog2n, "grid resolution 2^L");
  tow->add_option("--height", theight, "tower height");
  tow->add_option("--k", tk, "accuracy target 1/k");
  tow->add_option("--sets", sets_path, "JSON array of CellSets to approximate");
  tow->add_option("--perturb", perturb, "perturbation seed");
  tow->add_option("--out", tout, "write certificate JSON here (default: stdout)");

  auto* runc = app.add_subcommand("run", "full pipeline from a config file");
  std::string config_path;
  runc->add_option("--config", config_path, "ExperimentConfig JSON")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (metrics->parsed()) return cmd_metrics(map_a, map_b, basis_path, window);
    if (indep->parsed())
      return cmd_independence(log2n, map_path, iwindow, delta_str, seed, trials, out_path);
    if (conj->parsed())
      return cmd_conjugate(eps_str, ck, cwindow, clog2n, cseed, ctrials, out_dir);
    if (tow->parsed())
      return cmd_towers(tlog2n, theight, tk, sets_path, perturb, tout);
    if (runc->parsed()) return cmd_run(config_path);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
