// Command-line front end: instances, offline solvers, bidding strategies,
// chain reductions and hardness gadgets, wired into reproducible experiments
// that emit CSV tables and JSON summaries.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "medbid/bidding.hpp"
#include "medbid/dual_bound.hpp"
#include "medbid/generator.hpp"
#include "medbid/hardness.hpp"
#include "medbid/io.hpp"
#include "medbid/oblivious.hpp"
#include "medbid/optimal_ratio.hpp"
#include "medbid/solvers.hpp"
#include "medbid/version.hpp"

namespace fs = std::filesystem;
using namespace medbid;

namespace {

class VerificationFailure : public std::exception {
 public:
  explicit VerificationFailure(std::string what) : what_(std::move(what)) {}
  const char* what() const noexcept override { return what_.c_str(); }

 private:
  std::string what_;
};

struct Output {
  fs::path dir;
  std::string tag;
  std::string format;  // "csv" or "json"
  json config;
  json summary;

  void begin(const std::string& default_tag) {
    if (tag.empty()) tag = default_tag;
    summary = json::object();
    summary["version"] = kVersion;
    summary["config"] = config;
    fs::create_directories(dir);
  }

  fs::path path(const std::string& suffix) const { return dir / (tag + suffix); }

  void write_json_file(const std::string& suffix, const json& j) const {
    json wrapped = j;
    wrapped["version"] = kVersion;
    wrapped["config"] = config;
    std::ofstream out(path(suffix));
    out << wrapped.dump(2) << "\n";
  }

  void table(const std::string& name, const std::vector<std::string>& columns,
             const std::vector<std::vector<std::string>>& rows) {
    if (format == "json") {
      json t;
      t["columns"] = columns;
      t["rows"] = rows;
      summary["tables"][name] = std::move(t);
      return;
    }
    std::ofstream out(path("." + name + ".csv"));
    out << "# " << kVersion << "\n";
    out << "# config: " << config.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
  }

  void finish() const {
    std::ofstream out(path(".json"));
    out << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
  }
};

std::string number_cell(double v) { return format_double(v); }
std::string number_cell(const Rational& v) { return format_rational(v); }

SolverTag parse_solver(const std::string& name) {
  if (name == "exact") return SolverTag::Exact;
  if (name == "local") return SolverTag::LocalSearch;
  if (name == "greedy") return SolverTag::GreedySize;
  throw CLI::ValidationError("--solver", "must be exact|local|greedy");
}

// ---- bid ------------------------------------------------------------------

void run_bid_det(Output& out, long long n) {
  out.begin("bid_det");
  auto universe = Universe<double>::integer_range(n);
  auto bids = doubling_bids(universe);

  std::vector<std::vector<std::string>> rows;
  double max_ratio = 0, argmax = 0;
  for (double t : universe.values) {
    const double pay = payment(bids, t);
    const double ratio = pay / t;
    rows.push_back({number_cell(t), number_cell(pay), number_cell(ratio)});
    if (ratio > max_ratio) {
      max_ratio = ratio;
      argmax = t;
    }
  }
  out.table("per_threshold", {"threshold", "payment", "ratio"}, rows);
  out.summary["bids"] = bids.bids;
  out.summary["max_ratio"] = max_ratio;
  out.summary["argmax_T"] = argmax;
  out.finish();
}

void run_bid_rand(Output& out, long long n, const std::string& universe_file, int trials,
                  std::uint64_t seed) {
  out.begin("bid_rand");
  std::vector<double> values;
  if (!universe_file.empty()) {
    std::ifstream in(universe_file);
    if (!in) throw std::runtime_error("cannot open universe file: " + universe_file);
    json j = json::parse(in);
    for (const auto& v : j) values.push_back(v.get<double>());
  } else {
    for (long long i = 1; i <= n; ++i) values.push_back(static_cast<double>(i));
  }
  auto universe = Universe<double>::of(std::move(values));
  auto report = expected_ratio(
      [&](std::uint64_t s) { return randomized_bids(universe, s); }, universe.values,
      trials, seed);

  std::vector<std::vector<std::string>> rows;
  for (const auto& stat : report.per_threshold)
    rows.push_back({number_cell(stat.threshold), number_cell(stat.mean_payment),
                    number_cell(stat.mean_ratio)});
  out.table("per_threshold", {"threshold", "payment", "ratio"}, rows);
  out.summary["max_ratio"] = report.max_mean_ratio;
  out.summary["argmax_T"] = report.argmax_threshold;
  out.summary["trials"] = trials;
  out.finish();
}

void run_bid_optimal(Output& out, long long n) {
  out.begin("bid_optimal");
  auto result = optimal_det_ratio(n);

  std::vector<std::vector<std::string>> rows;
  std::vector<double> bids_d(result.bids.begin(), result.bids.end());
  BidSet<double> bids{std::move(bids_d), true};
  for (long long t = 1; t <= n; ++t) {
    const double pay = payment(bids, static_cast<double>(t));
    rows.push_back({std::to_string(t), number_cell(pay), number_cell(pay / t)});
  }
  out.table("per_threshold", {"threshold", "payment", "ratio"}, rows);
  out.summary["ratio"] = result.ratio.value();
  out.summary["ratio_exact"] =
      std::to_string(result.ratio.num) + "/" + std::to_string(result.ratio.den);
  out.summary["bids"] = result.bids;
  out.finish();
}

void run_bid_dual(Output& out, double U) {
  out.begin("bid_dual");
  auto cert = dual_certificate(U);
  const bool feasible = verify_dual_condition(cert);

  std::vector<std::vector<std::string>> rows;
  for (long long t = 1; t <= cert.n; ++t) {
    const double mu = cert.mu[static_cast<std::size_t>(t)];
    const double pi = cert.pi[static_cast<std::size_t>(t)];
    if (mu == 0 && pi == 0) continue;
    rows.push_back({std::to_string(t), number_cell(mu), number_cell(pi)});
  }
  out.table("certificate", {"T", "mu", "pi"}, rows);
  out.summary["U"] = U;
  out.summary["n"] = cert.n;
  out.summary["alpha"] = cert.alpha;
  out.summary["bound"] = cert.bound;
  out.summary["feasible"] = feasible;
  out.finish();
  if (!feasible) throw VerificationFailure("dual certificate infeasible");
}

// ---- solve ----------------------------------------------------------------

template <class Num>
void solve_typed(Output& out, const MedianInstance<Num>& inst, SolverTag tag,
                 double epsilon) {
  auto seq = solve_sequence(inst, tag, detail::num_from_double<Num>(epsilon));
  std::vector<std::vector<std::string>> rows;
  for (int k = 1; k <= seq.n(); ++k)
    rows.push_back({std::to_string(k), std::to_string(seq.set_for(k).size()),
                    number_cell(seq.cost_for(k))});
  out.table("per_k", {"k", "size", "cost"}, rows);
  out.write_json_file(".solution.json", offline_to_json(seq, inst));
  out.summary["solver"] = solver_tag_name(tag);
  out.summary["n"] = seq.n();
}

void run_solve(Output& out, const std::string& instance_path, const std::string& solver,
               double epsilon) {
  out.begin("solve");
  auto any = load_instance_file(instance_path);
  std::visit([&](const auto& inst) { solve_typed(out, inst, parse_solver(solver), epsilon); },
             any);
  out.finish();
}

// ---- oblivious ------------------------------------------------------------

template <class Num>
void oblivious_typed(Output& out, const MedianInstance<Num>& inst, const std::string& mode,
                     SolverTag tag, const std::string& bidder_name, std::uint64_t seed,
                     double epsilon, bool allow_relaxed) {
  auto offline = solve_sequence(inst, tag, detail::num_from_double<Num>(epsilon));
  auto oracle = tag == SolverTag::Exact ? offline : solve_sequence(inst, SolverTag::Exact);

  FacilityChain<Num> chain;
  if (mode == "cost") {
    BidderSpec bidder{bidder_name == "rand" ? BidderSpec::Kind::Randomized
                                            : BidderSpec::Kind::Doubling,
                      seed};
    auto metric = metric_report(inst);
    chain = build_cost_competitive(inst, offline, bidder, !allow_relaxed);
    if (metric.lambda_star.has_value())
      out.summary["lambda_star"] = to_double(*metric.lambda_star);
    out.summary["is_metric"] = metric.is_metric;
  } else if (mode == "size") {
    auto universe = Universe<Num>::integer_range(offline.n());
    BidSet<Num> bids = bidder_name == "rand" ? randomized_bids(universe, seed)
                                             : doubling_bids(universe);
    chain = build_size_competitive(inst, offline, bids);
  } else {
    throw CLI::ValidationError("--mode", "must be cost|size");
  }

  auto report = verify_chain(inst, chain, oracle);
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : report.rows) {
    if (mode == "cost")
      rows.push_back({std::to_string(row.k), std::to_string(row.size),
                      number_cell(row.cost_value), number_cell(row.opt),
                      number_cell(row.cost_ratio)});
    else
      rows.push_back({std::to_string(row.k), std::to_string(row.size),
                      number_cell(row.cost_value), number_cell(row.opt),
                      number_cell(row.size_ratio)});
  }
  out.table("report",
            mode == "cost"
                ? std::vector<std::string>{"k", "size", "cost", "opt", "cost_ratio"}
                : std::vector<std::string>{"k", "size", "cost", "opt", "size_ratio"},
            rows);
  out.write_json_file(".chain.json", chain_to_json(chain, inst));
  out.summary["mode"] = mode;
  out.summary["max_cost_ratio"] = report.max_cost_ratio;
  out.summary["max_size_ratio"] = report.max_size_ratio;
  out.summary["nesting_ok"] = report.nesting_ok;

  if (!report.nesting_ok) throw VerificationFailure("chain is not nested");
  if (mode == "size") {
    for (const auto& row : report.rows)
      if (!(row.cost_value <= row.opt))
        throw VerificationFailure("size-competitive chain exceeded opt at k=" +
                                  std::to_string(row.k));
  } else {
    for (const auto& row : report.rows)
      if (row.size > row.k)
        throw VerificationFailure("cost-competitive chain oversized at k=" +
                                  std::to_string(row.k));
  }
}

void run_oblivious(Output& out, const std::string& instance_path, const std::string& mode,
                   const std::string& solver, const std::string& bidder,
                   std::uint64_t seed, double epsilon, bool allow_relaxed) {
  out.begin("oblivious");
  auto any = load_instance_file(instance_path);
  std::visit(
      [&](const auto& inst) {
        oblivious_typed(out, inst, mode, parse_solver(solver), bidder, seed, epsilon,
                        allow_relaxed);
      },
      any);
  out.finish();
}

// ---- hardness -------------------------------------------------------------

void run_hardness_adv(Output& out, int m, bool verify) {
  out.begin("hardness_adv");
  auto adv = build_adversarial(m);
  out.write_json_file(".instance.json", instance_to_json(adv.instance));

  std::vector<std::vector<std::string>> rows;
  for (int j = 1; j <= m; ++j)
    rows.push_back(
        {std::to_string(j), number_cell(adv.deltas[static_cast<std::size_t>(j - 1)]),
         number_cell(cost(adv.instance, adv.clusters[static_cast<std::size_t>(j - 1)]))});
  out.table("clusters", {"j", "delta_j", "cost_Mj"}, rows);
  out.summary["m"] = m;
  out.summary["customers"] = adv.instance.num_customers();
  out.summary["facilities"] = adv.instance.num_facilities();
  bool ok = true;
  if (verify) {
    ok = verify_property_ii(adv, adv.instance.num_facilities());
    out.summary["property_ii"] = ok;
  }
  out.finish();
  if (!ok) throw VerificationFailure("property (ii) failed");
}

void run_hardness_kl(Output& out, int l, bool run_algorithm, int k) {
  out.begin("hardness_kl");
  auto kl = build_kl(l);
  out.write_json_file(".instance.json", instance_to_json(kl.instance));

  const Rational cost_f = cost(kl.instance, FacilitySet{0});
  const Rational cost_G = cost(kl.instance, kl.leaves);
  out.summary["l"] = l;
  out.summary["delta"] = format_rational(kl.delta);
  out.summary["cost_f"] = format_rational(cost_f);
  out.summary["cost_G"] = format_rational(cost_G);
  out.summary["cost_gi"] = format_rational(cost(kl.instance, FacilitySet{1}));
  out.summary["cost_G_swap_f"] =
      format_rational(cost(kl.instance, kl.leaves.without(1).with(0)));
  out.summary["ratio_target"] = format_rational(Rational(2 * l - 1, l));

  if (run_algorithm) {
    auto result = kl_algorithm(kl.instance, k, l);
    json alg;
    alg["k"] = k;
    alg["option"] = result.option;
    alg["ratio"] = format_rational(result.ratio);
    json fk = json::array(), fl = json::array();
    for (int f : result.f_k)
      fk.push_back(kl.instance.facilities[static_cast<std::size_t>(f)]);
    for (int f : result.f_l)
      fl.push_back(kl.instance.facilities[static_cast<std::size_t>(f)]);
    alg["f_k"] = std::move(fk);
    alg["f_l"] = std::move(fl);
    out.summary["algorithm"] = std::move(alg);
    if (!(result.ratio <= Rational(2 * l - 1, l)))
      throw VerificationFailure("kl_algorithm exceeded 2 - 1/l on the gadget");
  }
  out.finish();
}

// ---- gen ------------------------------------------------------------------

void run_gen(Output& out, int customers, int facilities, std::uint64_t seed) {
  out.begin("gen");
  auto inst = generate_random_metric(customers, facilities, seed);
  out.write_json_file(".instance.json", instance_to_json(inst));
  out.summary["customers"] = customers;
  out.summary["facilities"] = facilities;
  out.summary["is_metric"] = metric_report(inst).is_metric;
  out.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oblivious k-median chains and online bidding toolkit"};
  app.require_subcommand(1);
  // Global flags may follow the subcommand on the command line.
  app.fallthrough();

  Output out;
  std::string out_dir_flag;
  std::string format = "csv";
  std::string tag;
  std::uint64_t seed = 0;
  app.add_option("--out-dir", out_dir_flag, "output directory (default $MEDBID_OUT_DIR or .)");
  app.add_option("--format", format, "table format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tag", tag, "artifact file prefix (default: subcommand name)");
  app.add_option("--seed", seed, "seed for randomized strategies and generators");

  // bid
  auto* bid = app.add_subcommand("bid", "online bidding strategies and bounds");
  bid->require_subcommand(1);
  long long bid_n = 0;
  auto* bid_det = bid->add_subcommand("det", "doubling bids on U=[1..n]");
  bid_det->add_option("--n", bid_n, "universe size")->required();

  long long rand_n = 0;
  std::string universe_file;
  int trials = 10000;
  auto* bid_rand = bid->add_subcommand("rand", "randomized bids, Monte-Carlo ratios");
  bid_rand->add_option("--n", rand_n, "integer universe size");
  bid_rand->add_option("--universe", universe_file, "JSON array of universe values");
  bid_rand->add_option("--trials", trials, "Monte-Carlo trials");

  long long opt_n = 0;
  auto* bid_optimal = bid->add_subcommand("optimal", "exact optimal deterministic ratio");
  bid_optimal->add_option("--n", opt_n, "universe size")->required();

  double dual_U = 0;
  auto* bid_dual = bid->add_subcommand("dual", "lower-bound dual certificate");
  bid_dual->add_option("--U", dual_U, "certificate scale (n = ceil(U^2 ln U))")->required();

  // solve
  std::string instance_path, solver = "exact";
  double epsilon = 0.1;
  auto* solve = app.add_subcommand("solve", "offline k-median sequence for every k");
  solve->add_option("--instance", instance_path, "instance JSON file")->required();
  solve->add_option("--solver", solver, "exact|local|greedy");
  solve->add_option("--epsilon", epsilon, "local search improvement threshold");

  // oblivious
  std::string obl_instance, obl_mode = "cost", obl_solver = "exact", obl_bidder = "det";
  double obl_epsilon = 0.1;
  bool allow_relaxed = false;
  auto* oblivious = app.add_subcommand("oblivious", "build and verify a facility chain");
  auto* obl_build = oblivious->add_subcommand("build", "construct a chain via bidding");
  obl_build->add_option("--instance", obl_instance, "instance JSON file")->required();
  obl_build->add_option("--mode", obl_mode, "cost|size");
  obl_build->add_option("--solver", obl_solver, "exact|local|greedy");
  obl_build->add_option("--bidder", obl_bidder, "det|rand")
      ->check(CLI::IsMember({"det", "rand"}));
  obl_build->add_option("--epsilon", obl_epsilon, "local search improvement threshold");
  obl_build->add_flag("--allow-relaxed", allow_relaxed,
                      "accept non-metric instances and just report ratios");
  oblivious->require_subcommand(1);

  // hardness
  auto* hardness = app.add_subcommand("hardness", "lower-bound gadget generators");
  hardness->require_subcommand(1);
  int adv_m = 3;
  bool adv_verify = false;
  auto* adv = hardness->add_subcommand("adv", "adversarial metric space");
  adv->add_option("--m", adv_m, "levels (2..6)")->required();
  adv->add_flag("--verify", adv_verify, "exhaustive property (ii) check (m <= 5)");

  int kl_l = 3, kl_k = 1;
  bool kl_run = false;
  auto* kl = hardness->add_subcommand("kl", "two-budget star gadget");
  kl->add_option("--l", kl_l, "number of leaves (>= 2)")->required();
  kl->add_flag("--run-algorithm", kl_run, "run the better-of-two-options algorithm");
  kl->add_option("--k", kl_k, "small budget for --run-algorithm");

  // gen
  int gen_customers = 10, gen_facilities = 8;
  auto* gen = app.add_subcommand("gen", "random metric instance (rational grid)");
  gen->add_option("--customers", gen_customers, "customer count")->required();
  gen->add_option("--facilities", gen_facilities, "facility count")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const char* env_dir = std::getenv("MEDBID_OUT_DIR");
  out.dir = !out_dir_flag.empty() ? fs::path(out_dir_flag)
                                  : (env_dir ? fs::path(env_dir) : fs::path("."));
  out.format = format;
  out.tag = tag;

  json config;
  config["format"] = format;
  config["seed"] = seed;
  for (const CLI::App* sub = &app; !sub->get_subcommands().empty();) {
    sub = sub->get_subcommands().front();
    config["subcommand"].push_back(sub->get_name());
    for (const CLI::Option* opt : sub->get_options())
      if (opt->count() > 0 && !opt->get_lnames().empty())
        config["flags"][opt->get_lnames().front()] = opt->results().front();
  }
  out.config = std::move(config);

  try {
    if (bid_det->parsed()) run_bid_det(out, bid_n);
    else if (bid_rand->parsed()) {
      if (rand_n <= 0 && universe_file.empty())
        throw CLI::ValidationError("bid rand", "needs --n or --universe");
      run_bid_rand(out, rand_n, universe_file, trials, seed);
    } else if (bid_optimal->parsed()) run_bid_optimal(out, opt_n);
    else if (bid_dual->parsed()) run_bid_dual(out, dual_U);
    else if (solve->parsed()) run_solve(out, instance_path, solver, epsilon);
    else if (obl_build->parsed())
      run_oblivious(out, obl_instance, obl_mode, obl_solver, obl_bidder, seed, obl_epsilon,
                    allow_relaxed);
    else if (adv->parsed()) run_hardness_adv(out, adv_m, adv_verify);
    else if (kl->parsed()) run_hardness_kl(out, kl_l, kl_run, kl_k);
    else if (gen->parsed()) run_gen(out, gen_customers, gen_facilities, seed);
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    // Construction-time identities and guaranteed bounds; a trip here means
    // a verification invariant failed.
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
