#include "swipt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "swipt/sdp_baselines.hpp"
#include "swipt/units.hpp"

namespace swipt {

namespace {

constexpr double kRankTol = 1e-4;

const char* const kColumns[] = {"realization",       "M",          "N1",          "N2",
                                "P_dBm",             "gamma_dB",   "algorithm",   "status",
                                "objective_dBm",     "eh_dBm",     "outer_iterations", "solver_iterations",
                                "wall_ms",           "baseline_value_dBm", "baseline_gap", "baseline_work",
                                "baseline_rank_one"};

template <class T>
void take(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (M.empty() || P_dBm.empty() || gamma_dB.empty()) fail("sweep lists must be nonempty");
  for (int m : M)
    if (m < 1) fail("M must be positive");
  if (N1 < 0 || N2 < 0 || N1 + N2 < 1) fail("need at least one UE");
  if (static_cast<int>(distances.size()) != N1 + N2) fail("distances must list one value per UE");
  if (realizations < 1) fail("realizations must be >= 1");
  if (algorithm != "sum-eh" && algorithm != "max-min") fail("algorithm must be sum-eh or max-min");
  if (baseline != "none" && baseline != "sdp-fixed-alpha" && baseline != "bisection" && baseline != "bb")
    fail("unknown baseline '" + baseline + "'");
  if (baseline == "bisection" && algorithm != "max-min") fail("bisection baseline needs algorithm max-min");
  if ((baseline == "bb" || baseline == "sdp-fixed-alpha") && algorithm != "sum-eh")
    fail(baseline + " baseline needs algorithm sum-eh");
  if (N1 < 1) fail("need at least one EH-ID UE");
  if (!(zeta > 0.0 && zeta <= 1.0)) fail("zeta must lie in (0, 1]");
  if (workers < 0) fail("workers must be >= 0");
  try {
    algo().validate();
    for (int m : M) channel(m).validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

AlgoConfig ExperimentConfig::algo() const {
  AlgoConfig a;
  a.tol_converge = tol_converge;
  a.max_outer_iters = max_outer_iters;
  a.tol_solve = tol_solve;
  return a;
}

ChannelConfig ExperimentConfig::channel(int m) const {
  ChannelConfig c;
  c.carrier_freq = carrier_freq;
  c.antenna_gain = antenna_gain;
  c.ref_distance = ref_distance;
  c.pathloss_exponent = pathloss_exponent;
  c.rician_K = rician_K;
  c.num_antennas = m;
  c.distances = distances;
  c.seed = seed;
  return c;
}

NetworkInstance ExperimentConfig::instance(int m, double p_dbm, double g_db, std::uint64_t realization) const {
  NetworkInstance raw;
  raw.M = m;
  raw.N1 = N1;
  raw.N2 = N2;
  raw.h = draw_channel(channel(m), realization).h;
  raw.sigma_a_sq = dbm_to_watts(sigma_a_sq_dBm);
  raw.sigma_c_sq = dbm_to_watts(sigma_c_sq_dBm);
  raw.zeta.assign(N1, zeta);
  raw.gamma_min.assign(N1 + N2, db_to_linear(g_db));
  raw.P = dbm_to_watts(p_dbm);
  return normalize(raw);
}

ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const char* const known[] = {
      "carrier_freq", "antenna_gain", "ref_distance", "pathloss_exponent", "rician_K", "M", "N1", "N2",
      "distances", "sigma_a_sq_dBm", "sigma_c_sq_dBm", "zeta", "P_dBm", "gamma_dB", "realizations", "seed",
      "algorithm", "baseline", "tol_converge", "max_outer_iters", "tol_solve", "output", "record_timing", "workers"};
  for (const auto& item : j.items()) {
    if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return item.key() == k; }))
      throw ConfigError("unknown key '" + item.key() + "'");
  }
  ExperimentConfig c;
  take(j, "carrier_freq", c.carrier_freq);
  take(j, "antenna_gain", c.antenna_gain);
  take(j, "ref_distance", c.ref_distance);
  take(j, "pathloss_exponent", c.pathloss_exponent);
  take(j, "rician_K", c.rician_K);
  if (j.contains("M") && j.at("M").is_number_integer()) c.M = {j.at("M").get<int>()};
  else take(j, "M", c.M);
  take(j, "N1", c.N1);
  take(j, "N2", c.N2);
  take(j, "distances", c.distances);
  take(j, "sigma_a_sq_dBm", c.sigma_a_sq_dBm);
  take(j, "sigma_c_sq_dBm", c.sigma_c_sq_dBm);
  take(j, "zeta", c.zeta);
  take(j, "P_dBm", c.P_dBm);
  take(j, "gamma_dB", c.gamma_dB);
  take(j, "realizations", c.realizations);
  take(j, "seed", c.seed);
  take(j, "algorithm", c.algorithm);
  take(j, "baseline", c.baseline);
  take(j, "tol_converge", c.tol_converge);
  take(j, "max_outer_iters", c.max_outer_iters);
  take(j, "tol_solve", c.tol_solve);
  take(j, "output", c.output);
  take(j, "record_timing", c.record_timing);
  take(j, "workers", c.workers);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

bool RunRecord::degraded() const {
  return status == "degraded" || status == "max_outer_iters" || status == "numerical_failure" || status == "error";
}

bool RunRecord::has_objective() const { return std::isfinite(objective_dBm); }

namespace {

RunRecord run_one(const ExperimentConfig& cfg, int m, double p_dbm, double g_db, int realization) {
  RunRecord rec;
  rec.realization = realization;
  rec.M = m;
  rec.N1 = cfg.N1;
  rec.N2 = cfg.N2;
  rec.P_dBm = p_dbm;
  rec.gamma_dB = g_db;
  rec.algorithm = cfg.algorithm;
  rec.objective_dBm = std::numeric_limits<double>::quiet_NaN();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const NetworkInstance inst = cfg.instance(m, p_dbm, g_db, static_cast<std::uint64_t>(realization));
    const AlgoConfig algo = cfg.algo();
    const RunResult res = cfg.algorithm == "sum-eh" ? maximize_sum_eh(inst, algo) : maximize_min_eh(inst, algo);
    rec.status = to_string(res.status);
    rec.outer_iterations = res.outer_iterations;
    rec.solver_iterations = res.solver_iterations;
    if (res.status != RunStatus::Infeasible && res.status != RunStatus::NumericalFailure) {
      rec.objective_dBm = watts_to_dbm(res.objective * inst.scale);
      for (int k = 0; k < inst.N1; ++k)
        rec.eh_dBm.push_back(watts_to_dbm(harvested_energy(inst, res.point, k) * inst.scale));
      double value = std::numeric_limits<double>::quiet_NaN();
      if (cfg.baseline == "sdp-fixed-alpha") {
        const OuterProductSolution sol = solve_relaxation_fixed_alpha(inst, res.point.alpha);
        value = sol.value;
        rec.baseline_work = 1;
        if (sol.status == conic::SolverStatus::Optimal) rec.baseline_rank_one = sol.rank_one(kRankTol);
      } else if (cfg.baseline == "bisection") {
        const BisectionResult b = bisection_max_min(inst);
        value = b.upper_bound;
        rec.baseline_work = b.sdp_solves;
        if (!b.solution.W.empty()) rec.baseline_rank_one = b.solution.rank_one(kRankTol);
      } else if (cfg.baseline == "bb") {
        const BBResult b = bb_sum_eh(inst, 1e-2, 500, algo);
        value = b.upper_bound;
        rec.baseline_work = b.nodes_expanded;
      }
      if (std::isfinite(value) && value > 0.0) {
        rec.baseline_value_dBm = watts_to_dbm(value * inst.scale);
        rec.baseline_gap = (value - res.objective) / value;
      }
    }
  } catch (const std::exception&) {
    rec.status = "error";
  }
  if (cfg.record_timing)
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Job {
    int m;
    double p, g;
    int r;
  };
  std::vector<Job> jobs;
  for (int m : cfg.M)
    for (double p : cfg.P_dBm)
      for (double g : cfg.gamma_dB)
        for (int r = 0; r < cfg.realizations; ++r) jobs.push_back({m, p, g, r});
  std::vector<RunRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) out[i] = run_one(cfg, jobs[i].m, jobs[i].p, jobs[i].g, jobs[i].r);
  };
  int n = cfg.workers == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : cfg.workers;
  n = std::clamp(n, 1, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  for (std::size_t c = 0; c < std::size(kColumns); ++c) os << (c ? "," : "") << kColumns[c];
  os << "\r\n";
  for (const RunRecord& r : records) {
    std::string eh;
    for (std::size_t k = 0; k < r.eh_dBm.size(); ++k) eh += (k ? ";" : "") + format_double(r.eh_dBm[k]);
    const std::string fields[] = {
        std::to_string(r.realization),
        std::to_string(r.M),
        std::to_string(r.N1),
        std::to_string(r.N2),
        format_double(r.P_dBm),
        format_double(r.gamma_dB),
        r.algorithm,
        r.status,
        format_double(r.objective_dBm),
        eh,
        std::to_string(r.outer_iterations),
        std::to_string(r.solver_iterations),
        r.wall_ms ? format_double(*r.wall_ms) : "",
        r.baseline_value_dBm ? format_double(*r.baseline_value_dBm) : "",
        r.baseline_gap ? format_double(*r.baseline_gap) : "",
        r.baseline_work ? std::to_string(*r.baseline_work) : "",
        r.baseline_rank_one ? (*r.baseline_rank_one ? "1" : "0") : "",
    };
    for (std::size_t c = 0; c < std::size(fields); ++c) os << (c ? "," : "") << csv_field(fields[c]);
    os << "\r\n";
  }
}

namespace {

// One RFC 4180 record; false at end of input.
bool read_row(std::istream& is, std::vector<std::string>& row) {
  row.clear();
  if (is.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  for (int ch; (ch = is.get()) != std::char_traits<char>::eof();) {
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c != '"') field += c;
      else if (is.peek() == '"') field += static_cast<char>(is.get());
      else quoted = false;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  row.push_back(std::move(field));
  return true;
}

double parse_double(const std::string& s) {
  return s.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
}

}  // namespace

std::vector<RunRecord> read_csv(std::istream& is) {
  std::vector<std::string> header, row;
  if (!read_row(is, header)) throw std::runtime_error("empty CSV");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* c : kColumns)
    if (!col.count(c)) throw std::runtime_error(std::string("CSV lacks column ") + c);
  std::vector<RunRecord> out;
  while (read_row(is, row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) throw std::runtime_error("ragged CSV row");
    auto f = [&](const char* name) -> const std::string& { return row[col[name]]; };
    RunRecord r;
    r.realization = std::stoi(f("realization"));
    r.M = std::stoi(f("M"));
    r.N1 = std::stoi(f("N1"));
    r.N2 = std::stoi(f("N2"));
    r.P_dBm = parse_double(f("P_dBm"));
    r.gamma_dB = parse_double(f("gamma_dB"));
    r.algorithm = f("algorithm");
    r.status = f("status");
    r.objective_dBm = parse_double(f("objective_dBm"));
    std::stringstream eh(f("eh_dBm"));
    for (std::string v; std::getline(eh, v, ';');) r.eh_dBm.push_back(parse_double(v));
    r.outer_iterations = std::stoi(f("outer_iterations"));
    r.solver_iterations = std::stoi(f("solver_iterations"));
    if (!f("wall_ms").empty()) r.wall_ms = parse_double(f("wall_ms"));
    if (!f("baseline_value_dBm").empty()) r.baseline_value_dBm = parse_double(f("baseline_value_dBm"));
    if (!f("baseline_gap").empty()) r.baseline_gap = parse_double(f("baseline_gap"));
    if (!f("baseline_work").empty()) r.baseline_work = std::stoi(f("baseline_work"));
    if (!f("baseline_rank_one").empty()) r.baseline_rank_one = f("baseline_rank_one") == "1";
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
  struct Acc {
    AggregateRow row;
    std::vector<double> w;
    int total = 0, degraded = 0, infeasible = 0;
    double iters = 0.0;
  };
  std::vector<Acc> cells;
  for (const RunRecord& r : records) {
    auto it = std::find_if(cells.begin(), cells.end(), [&](const Acc& a) {
      return a.row.M == r.M && a.row.P_dBm == r.P_dBm && a.row.gamma_dB == r.gamma_dB && a.row.algorithm == r.algorithm;
    });
    if (it == cells.end()) {
      cells.push_back({});
      it = cells.end() - 1;
      it->row.M = r.M;
      it->row.P_dBm = r.P_dBm;
      it->row.gamma_dB = r.gamma_dB;
      it->row.algorithm = r.algorithm;
    }
    ++it->total;
    it->degraded += r.degraded();
    it->infeasible += r.status == "infeasible";
    if (r.has_objective()) {
      it->w.push_back(dbm_to_watts(r.objective_dBm));
      it->iters += r.outer_iterations;
    }
  }
  std::vector<AggregateRow> out;
  for (Acc& a : cells) {
    AggregateRow& row = a.row;
    const int n = static_cast<int>(a.w.size());
    row.count = n;
    row.degraded_fraction = static_cast<double>(a.degraded) / a.total;
    row.infeasible_fraction = static_cast<double>(a.infeasible) / a.total;
    if (n > 0) {
      // Shifted by the first sample so that constant data has zero spread.
      double shift = 0.0;
      for (double v : a.w) shift += v - a.w[0];
      shift /= n;
      double ss = 0.0;
      for (double v : a.w) ss += (v - a.w[0] - shift) * (v - a.w[0] - shift);
      const double mean = a.w[0] + shift;
      row.mean_w = mean;
      row.stderr_w = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
      row.mean_dBm = watts_to_dbm(mean);
      row.mean_outer_iterations = a.iters / n;
    } else {
      row.mean_dBm = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(row);
  }
  return out;
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "M,P_dBm,gamma_dB,algorithm,count,mean_w,stderr_w,mean_dBm,mean_outer_iterations,degraded_fraction,"
        "infeasible_fraction\r\n";
  for (const AggregateRow& r : rows) {
    os << r.M << ',' << format_double(r.P_dBm) << ',' << format_double(r.gamma_dB) << ',' << csv_field(r.algorithm)
       << ',' << r.count << ',' << format_double(r.mean_w) << ',' << format_double(r.stderr_w) << ','
       << format_double(r.mean_dBm) << ',' << format_double(r.mean_outer_iterations) << ','
       << format_double(r.degraded_fraction) << ',' << format_double(r.infeasible_fraction) << "\r\n";
  }
}

}  // namespace swipt
