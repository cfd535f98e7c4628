#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pharmonic/errors.hpp"
#include "pharmonic/json_io.hpp"
#include "pharmonic/periodic_finite.hpp"
#include "pharmonic/periodic_infinite.hpp"
#include "pharmonic/plaplace.hpp"
#include "pharmonic/rng.hpp"
#include "pharmonic/subgroup.hpp"
#include "pharmonic/word.hpp"

namespace {

using namespace pharmonic;

constexpr int exit_ok = 0;
constexpr int exit_verification = 1;
constexpr int exit_config = 2;
constexpr int exit_rejected_spec = 3;

std::uint64_t vertex_cap() {
  const char* env = std::getenv("PHARMONIC_VERTEX_CAP");
  if (env == nullptr || *env == '\0') return default_vertex_cap;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || value == 0) {
    throw ValidationError("PHARMONIC_VERTEX_CAP must be a positive integer");
  }
  return static_cast<std::uint64_t>(value);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

json parse_json_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed ") + what + ": " + e.what());
  }
}

std::uint64_t config_hash(const json& config) { return fnv1a64(config.dump()); }

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// CSV sink with the reproducibility header; stdout when no path is given
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const json& config, std::uint64_t seed) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ValidationError("cannot open output file: " + path);
      out_ = &file_;
    } else {
      out_ = &std::cout;
    }
    (*out_) << "# config=" << hash_hex(config_hash(config)) << " seed=" << seed
            << "\n";
  }

  void line(const std::string& s) { (*out_) << s << "\n"; }

 private:
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

std::pair<long, long> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ValidationError("range looks like \"lo:hi\", got: " + text);
  }
  try {
    const long lo = std::stol(text.substr(0, colon));
    const long hi = std::stol(text.substr(colon + 1));
    if (lo > hi) throw ValidationError("empty range: " + text);
    return {lo, hi};
  } catch (const std::invalid_argument&) {
    throw ValidationError("range looks like \"lo:hi\", got: " + text);
  } catch (const std::out_of_range&) {
    throw ValidationError("range bounds out of range: " + text);
  }
}

// compact comma-free token for CSV cells
std::string spec_token(const FiniteIndexSpec& spec) {
  std::string out = "A=";
  for (const auto& subset : spec.subsets) {
    out += "{";
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (i > 0) out += " ";
      out += std::to_string(subset[i]);
    }
    out += "}";
  }
  return out;
}

void write_svg_line_chart(const std::string& path, const std::vector<long>& xs,
                          const std::vector<double>& ys) {
  const double width = 640.0;
  const double height = 400.0;
  const double margin = 56.0;
  double ylo = ys.front();
  double yhi = ys.front();
  for (double y : ys) {
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  }
  if (yhi == ylo) {
    yhi += 1.0;
    ylo -= 1.0;
  }
  const double xlo = static_cast<double>(xs.front());
  const double xhi = static_cast<double>(xs.back());
  const auto sx = [&](double x) {
    return margin + (x - xlo) / (xhi - xlo) * (width - 2 * margin);
  };
  const auto sy = [&](double y) {
    return height - margin - (y - ylo) / (yhi - ylo) * (height - 2 * margin);
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open plot file: " + path);
  char buf[160];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"400\" viewBox=\"0 0 640 400\">\n";
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                "stroke=\"black\"/>\n",
                margin, height - margin, width - margin, height - margin);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                "stroke=\"black\"/>\n",
                margin, margin, margin, height - margin);
  out << buf;
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
         "points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f ",
                  sx(static_cast<double>(xs[i])), sy(ys[i]));
    out << buf;
  }
  out << "\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">%ld</text>\n",
                margin, height - margin + 16, xs.front());
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" "
                "text-anchor=\"end\">%ld</text>\n",
                width - margin, height - margin + 16, xs.back());
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">%.6g</text>\n",
                4.0, height - margin, ylo);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">%.6g</text>\n",
                4.0, margin + 4, yhi);
  out << buf;
  out << "</svg>\n";
}

// ---------------------------------------------------------------- coset ----

struct CosetArgs {
  std::string spec_path;
  std::string word_text;
  int order = 2;
};

int run_coset(const CosetArgs& args) {
  const SubgroupSpec spec =
      subgroup_spec_from_json(load_json_file(args.spec_path), args.order);
  const ReducedWord word = word_from_json(
      parse_json_text(args.word_text, "word"), args.order);
  if (const auto* finite = std::get_if<FiniteIndexSpec>(&spec)) {
    validate_and_index(*finite);
    std::cout << json(parity_label(word, *finite)).dump() << "\n";
  } else {
    const long n = coset_index(word, std::get<InfiniteIndexPair>(spec));
    if (n > 0) std::cout << "+";
    std::cout << n << "\n";
  }
  return exit_ok;
}

// ------------------------------------------------------------ laplacian ----

struct LaplacianArgs {
  std::string u_path;
  std::string word_text;
  std::string seq_path;
  std::string spec_path;
  std::string out_path;
  int order = 2;
  double p = 2.0;
  double r_const = 1.0;
  double tol = -1.0;  // negative: report only
};

int run_laplacian(const LaplacianArgs& args) {
  check_p(args.p);
  const VertexFunction u =
      vertex_function_from_json(load_json_file(args.u_path), args.order);

  ResistanceAssignment r = ResistanceAssignment::constant(args.r_const);
  if (!args.seq_path.empty()) {
    if (args.spec_path.empty()) {
      throw ValidationError("--seq needs --spec with a pair subgroup");
    }
    const SubgroupSpec spec =
        subgroup_spec_from_json(load_json_file(args.spec_path), args.order);
    const auto* pair = std::get_if<InfiniteIndexPair>(&spec);
    if (pair == nullptr) {
      throw ValidationError("sequence resistances need a pair subgroup spec");
    }
    r = sequence_resistances(*pair, sequence_from_json(load_json_file(args.seq_path)));
  }

  json config{{"command", "laplacian"}, {"k", args.order}, {"p", args.p}};

  if (!args.word_text.empty()) {
    const ReducedWord x =
        word_from_json(parse_json_text(args.word_text, "word"), args.order);
    const double value = p_laplacian(u, x, r, args.p);
    std::cout << fmt(value) << "\n";
    if (args.tol >= 0.0 && std::fabs(value) > args.tol) {
      return exit_verification;
    }
    return exit_ok;
  }

  // every vertex whose full neighborhood carries values
  std::vector<ReducedWord> evaluable;
  for (const auto& [x, value] : u.values()) {
    (void)value;
    bool complete = true;
    for (const ReducedWord& y : neighbors(x)) {
      if (!u.contains(y)) {
        complete = false;
        break;
      }
    }
    if (complete) evaluable.push_back(x);
  }
  std::sort(evaluable.begin(), evaluable.end());

  CsvWriter csv(args.out_path, config, 0);
  csv.line("vertex,residual");
  double worst = 0.0;
  for (const ReducedWord& x : evaluable) {
    const double value = p_laplacian(u, x, r, args.p);
    worst = std::max(worst, std::fabs(value));
    csv.line("\"" + word_to_json(x).dump() + "\"," + fmt(value));
  }
  csv.line("# summary max_residual=" + fmt(worst) + " vertices=" +
           std::to_string(evaluable.size()));
  if (args.tol >= 0.0 && worst > args.tol) return exit_verification;
  return exit_ok;
}

// ------------------------------------------------------------ dirichlet ----

struct DirichletArgs {
  std::string boundary_path;
  std::string family;
  double amplitude = 1.0;
  double offset = 0.0;
  std::string seq_path;
  std::string spec_path;
  std::string center_text = "[]";
  std::string out_path;
  int order = 2;
  int radius = 4;
  double p = 2.0;
  double tol = 1e-10;
  double r_const = 1.0;
  int max_sweeps = 100000;
};

int run_dirichlet(const DirichletArgs& args) {
  check_p(args.p);
  const ReducedWord center =
      word_from_json(parse_json_text(args.center_text, "center"), args.order);
  const Ball region = ball(center, args.radius, vertex_cap());

  ResistanceAssignment r = ResistanceAssignment::constant(args.r_const);
  std::optional<InfiniteIndexPair> pair;
  std::optional<ResistanceSequence> seq;
  if (!args.seq_path.empty()) {
    if (args.spec_path.empty()) {
      throw ValidationError("--seq needs --spec with a pair subgroup");
    }
    const SubgroupSpec spec =
        subgroup_spec_from_json(load_json_file(args.spec_path), args.order);
    const auto* p2 = std::get_if<InfiniteIndexPair>(&spec);
    if (p2 == nullptr) {
      throw ValidationError("sequence resistances need a pair subgroup spec");
    }
    pair = *p2;
    seq = sequence_from_json(load_json_file(args.seq_path));
    r = sequence_resistances(*pair, *seq);
  }

  VertexFunction boundary;
  std::optional<FamilyMember> member;
  if (!args.boundary_path.empty()) {
    boundary =
        vertex_function_from_json(load_json_file(args.boundary_path), args.order);
  } else if (!args.family.empty()) {
    if (!pair.has_value()) {
      throw ValidationError("--family boundaries need --seq and a pair --spec");
    }
    member = member_from_json(json{{"family", args.family},
                                   {"amplitude", args.amplitude},
                                   {"offset", args.offset}},
                              *seq);
    for (int i : region.boundary) {
      const ReducedWord& x = region.vertices[i];
      boundary.set(x, evaluate_at_vertex(*member, x, *pair));
    }
  } else {
    throw ValidationError("provide --boundary or a --family boundary");
  }

  DirichletOptions options;
  options.max_sweeps = args.max_sweeps;
  const DirichletResult result =
      dirichlet_solve(region, boundary, r, args.p, args.tol, options);

  json config{{"command", "dirichlet"}, {"k", args.order},
              {"radius", args.radius}, {"p", args.p},  {"tol", args.tol}};
  CsvWriter csv(args.out_path, config, 0);
  csv.line("vertex,value");
  std::vector<ReducedWord> order_of_output = region.vertices;
  std::sort(order_of_output.begin(), order_of_output.end());
  for (const ReducedWord& x : order_of_output) {
    csv.line("\"" + word_to_json(x).dump() + "\"," + fmt(result.u.at(x)));
  }
  csv.line("# residual=" + fmt(result.residual) + " sweeps=" +
           std::to_string(result.sweeps) +
           " converged=" + (result.converged ? "1" : "0"));
  if (member.has_value()) {
    double deviation = 0.0;
    for (std::size_t i = 0; i < region.vertices.size(); ++i) {
      if (region.depth[i] == region.radius) continue;
      const ReducedWord& x = region.vertices[i];
      deviation = std::max(
          deviation,
          std::fabs(result.u.at(x) - evaluate_at_vertex(*member, x, *pair)));
    }
    csv.line("# max_interior_deviation=" + fmt(deviation));
  }
  return result.converged ? exit_ok : exit_verification;
}

// ------------------------------------------------------------ verify-t2 ----

struct VerifyT2Args {
  std::string config_path;
  std::string out_path;
  double p_override = -1.0;
  double tol_override = -1.0;
  long seed_override = -1;
};

int run_verify_t2(const VerifyT2Args& args) {
  json config = load_json_file(args.config_path);
  if (args.p_override > 0.0) config["p"] = args.p_override;
  if (args.tol_override > 0.0) config["tol"] = args.tol_override;
  if (args.seed_override >= 0) {
    config["seed"] = static_cast<std::uint64_t>(args.seed_override);
  }

  const int order = config.value("k", 2);
  if (!config.contains("spec")) throw ValidationError("config needs \"spec\"");
  const SubgroupSpec spec = subgroup_spec_from_json(config.at("spec"), order);
  const auto* finite = std::get_if<FiniteIndexSpec>(&spec);
  if (finite == nullptr) {
    throw ValidationError("verify-t2 needs a finite-index spec");
  }
  const double p = config.value("p", 3.0);
  check_p(p);
  const double tol = config.value("tol", 1e-10);
  const double spread_tol = config.value("spread_tol", 1e-6);
  if (!(tol > 0.0) || !(spread_tol > 0.0)) {
    throw ValidationError("tolerances must be positive");
  }
  const int starts = config.value("starts", 100);
  if (starts < 1) throw ValidationError("starts must be >= 1");
  const std::uint64_t seed = config.value("seed", 0ull);
  const int max_sweeps = config.value("max_sweeps", 100000);

  const QuotientGraph q = quotient_graph(*finite);
  Rng rng(seed);

  CosetResistances resistances(q.parity_count);
  if (config.contains("resistances") && config.at("resistances").is_object() &&
      !config.at("resistances").contains("random")) {
    resistances = coset_resistances_from_json(config.at("resistances"), q);
  } else {
    resistances = CosetResistances::draw_log_uniform(q, rng);
  }

  CsvWriter csv(args.out_path, config, seed);
  csv.line("k,spec,p,start_id,spread,residual,iterations");
  const std::string prefix = std::to_string(order) + "," +
                             spec_token(*finite) + "," + fmt(p) + ",";
  bool all_converged = true;
  double max_spread = 0.0;
  double max_residual = 0.0;
  for (int id = 0; id < starts; ++id) {
    PeriodicProfile start(q.num_cosets(), 0.0);
    if (id > 0) {
      for (double& v : start) v = rng.uniform(-1.0, 1.0);
    }
    const PeriodicSolveResult result =
        solve_periodic(q, resistances, p, start, tol, max_sweeps, spread_tol);
    all_converged = all_converged && result.converged;
    max_spread = std::max(max_spread, result.spread);
    max_residual = std::max(max_residual, result.residual);
    csv.line(prefix + std::to_string(id) + "," + fmt(result.spread) + "," +
             fmt(result.residual) + "," + std::to_string(result.sweeps));
  }
  csv.line("# summary max_spread=" + fmt(max_spread) + " max_residual=" +
           fmt(max_residual) + " all_converged=" + (all_converged ? "1" : "0"));
  return all_converged ? exit_ok : exit_verification;
}

// --------------------------------------------------------------- family ----

struct FamilyArgs {
  std::string family = "U1";
  double amplitude = 1.0;
  double offset = 0.0;
  std::string seq_path;
  std::string range_text = "-10:10";
  std::string out_path;
  std::string plot_path;
};

int run_family(const FamilyArgs& args) {
  const ResistanceSequence seq =
      sequence_from_json(load_json_file(args.seq_path));
  const FamilyMember member = member_from_json(
      json{{"family", args.family},
           {"amplitude", args.amplitude},
           {"offset", args.offset}},
      seq);
  const auto [lo, hi] = parse_range(args.range_text);

  json config{{"command", "family"},
              {"member", member_to_json(member)},
              {"seq", sequence_to_json(seq)},
              {"range", {lo, hi}}};
  CsvWriter csv(args.out_path, config, 0);
  csv.line("n,u_n");
  std::vector<long> xs;
  std::vector<double> ys;
  for (long n = lo; n <= hi; ++n) {
    const double value = evaluate(member, n);
    xs.push_back(n);
    ys.push_back(value);
    csv.line(std::to_string(n) + "," + fmt(value));
  }
  if (!args.plot_path.empty()) write_svg_line_chart(args.plot_path, xs, ys);
  return exit_ok;
}

// ------------------------------------------------------------ verify-t4 ----

struct VerifyT4Args {
  std::string config_path;
  std::string out_path;
  double p_override = -1.0;
  double tol_override = -1.0;
  std::string range_override;
};

int run_verify_t4(const VerifyT4Args& args) {
  json config = load_json_file(args.config_path);
  if (args.p_override > 0.0) config["p"] = args.p_override;
  if (args.tol_override > 0.0) config["tol"] = args.tol_override;
  if (!args.range_override.empty()) {
    const auto [lo, hi] = parse_range(args.range_override);
    config["range"] = {lo, hi};
  }

  const int order = config.value("k", 2);
  if (!config.contains("seq")) throw ValidationError("config needs \"seq\"");
  const ResistanceSequence seq = sequence_from_json(config.at("seq"));
  if (!config.contains("members") || !config.at("members").is_array() ||
      config.at("members").empty()) {
    throw ValidationError("config needs a nonempty \"members\" array");
  }
  Combination combination;
  for (const json& jm : config.at("members")) {
    // member-level sequences, when present, must agree with the shared one;
    // combine() rejects mismatches
    const ResistanceSequence member_seq =
        jm.contains("seq") ? sequence_from_json(jm.at("seq")) : seq;
    combination.members.push_back(member_from_json(jm, member_seq));
  }
  if (!config.contains("coefficients") ||
      !config.at("coefficients").is_array() ||
      config.at("coefficients").size() != combination.members.size()) {
    throw ValidationError(
        "config needs \"coefficients\" matching the member count");
  }
  for (const json& t : config.at("coefficients")) {
    combination.coefficients.push_back(t.get<double>());
  }

  const double p = config.value("p", 2.0);
  check_p(p);
  const double tol = config.value("tol", 1e-10);
  long lo = -30;
  long hi = 30;
  if (config.contains("range")) {
    const json& r = config.at("range");
    if (!r.is_array() || r.size() != 2) {
      throw ValidationError("range must be [lo, hi]");
    }
    lo = r[0].get<long>();
    hi = r[1].get<long>();
    if (lo > hi) throw ValidationError("empty range");
  }

  VertexCheck check;
  check.vertex_cap = vertex_cap();
  if (!config.contains("pair")) throw ValidationError("config needs \"pair\"");
  const SubgroupSpec pair_spec =
      subgroup_spec_from_json(json{{"pair", config.at("pair")}}, order);
  check.pair = std::get<InfiniteIndexPair>(pair_spec);
  check.radius = config.value("ball_radius", 6);
  if (config.contains("center")) {
    check.center = word_from_json(config.at("center"), order);
  }

  const CombinationReport report =
      verify_combination(combination, p, lo, hi, tol, check);

  CsvWriter csv(args.out_path, config, config.value("seed", 0ull));
  csv.line("n,residual");
  const CombinedProfile v = combine(combination);
  const IndexProfile profile = v.profile();
  for (long n = lo; n <= hi; ++n) {
    csv.line(std::to_string(n) + "," +
             fmt(difference_residual(profile, seq, p, n)));
  }
  const HarmonicityReport& vertex = *report.vertex_report;
  csv.line("# vertex_check max_residual=" + fmt(vertex.max_residual) +
           " pass=" + (vertex.pass ? "1" : "0"));
  csv.line("# summary max_residual=" + fmt(report.max_residual) + " worst_n=" +
           std::to_string(report.worst_index) +
           " pass=" + (report.pass ? "1" : "0"));
  return report.pass ? exit_ok : exit_verification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "periodic p-harmonic functions on the order-k regular tree: subgroup "
      "labels, p-Laplacian evaluation, Dirichlet solves and verification "
      "sweeps"};
  app.require_subcommand(1);

  CosetArgs coset_args;
  CLI::App* coset = app.add_subcommand(
      "coset", "classify a word: parity label or integer coset index");
  coset->add_option("--spec", coset_args.spec_path, "subgroup spec JSON file")
      ->required();
  coset->add_option("--word", coset_args.word_text, "word as a JSON array")
      ->required();
  coset->add_option("--k", coset_args.order, "tree order");

  LaplacianArgs lap_args;
  CLI::App* lap = app.add_subcommand(
      "laplacian", "p-Laplacian residuals of a vertex function");
  lap->add_option("--u", lap_args.u_path, "vertex function JSON file")
      ->required();
  lap->add_option("--p", lap_args.p, "exponent")->required();
  lap->add_option("--k", lap_args.order, "tree order");
  lap->add_option("--word", lap_args.word_text, "single vertex to evaluate");
  lap->add_option("--r", lap_args.r_const, "constant resistance");
  lap->add_option("--seq", lap_args.seq_path, "resistance sequence JSON file");
  lap->add_option("--spec", lap_args.spec_path, "pair subgroup spec file");
  lap->add_option("--out", lap_args.out_path, "output CSV path");
  lap->add_option("--tol", lap_args.tol, "fail when any residual exceeds this");

  DirichletArgs dir_args;
  CLI::App* dir = app.add_subcommand(
      "dirichlet", "minimize the p-energy on a ball with fixed boundary");
  dir->add_option("--k", dir_args.order, "tree order");
  dir->add_option("--radius", dir_args.radius, "ball radius")->required();
  dir->add_option("--center", dir_args.center_text, "center word");
  dir->add_option("--p", dir_args.p, "exponent")->required();
  dir->add_option("--tol", dir_args.tol, "residual tolerance");
  dir->add_option("--boundary", dir_args.boundary_path,
                  "boundary values JSON file");
  dir->add_option("--family", dir_args.family, "U1 or U2 boundary source");
  dir->add_option("--amplitude", dir_args.amplitude, "family amplitude");
  dir->add_option("--offset", dir_args.offset, "family offset");
  dir->add_option("--seq", dir_args.seq_path, "resistance sequence JSON file");
  dir->add_option("--spec", dir_args.spec_path, "pair subgroup spec file");
  dir->add_option("--r", dir_args.r_const, "constant resistance");
  dir->add_option("--max-sweeps", dir_args.max_sweeps, "iteration cap");
  dir->add_option("--out", dir_args.out_path, "output CSV path");

  VerifyT2Args t2_args;
  CLI::App* t2 = app.add_subcommand(
      "verify-t2",
      "solve the finite-index coset system from many starts; constants only");
  t2->add_option("--config", t2_args.config_path, "job config JSON file")
      ->required();
  t2->add_option("--out", t2_args.out_path, "output CSV path");
  t2->add_option("--p", t2_args.p_override, "override config p");
  t2->add_option("--tol", t2_args.tol_override, "override config tol");
  t2->add_option("--seed", t2_args.seed_override, "override config seed");

  FamilyArgs fam_args;
  CLI::App* fam = app.add_subcommand(
      "family", "tabulate a one-parameter solution family over an index range");
  fam->add_option("--family", fam_args.family, "U1 or U2")->required();
  fam->add_option("--amplitude", fam_args.amplitude, "amplitude (>= 0)");
  fam->add_option("--offset", fam_args.offset, "additive offset");
  fam->add_option("--seq", fam_args.seq_path, "resistance sequence JSON file")
      ->required();
  fam->add_option("--range", fam_args.range_text, "index range lo:hi");
  fam->add_option("--out", fam_args.out_path, "output CSV path");
  fam->add_option("--plot", fam_args.plot_path, "optional SVG line chart");

  VerifyT4Args t4_args;
  CLI::App* t4 = app.add_subcommand(
      "verify-t4",
      "verify that a linear combination of family members stays p-harmonic");
  t4->add_option("--config", t4_args.config_path, "job config JSON file")
      ->required();
  t4->add_option("--out", t4_args.out_path, "output CSV path");
  t4->add_option("--p", t4_args.p_override, "override config p");
  t4->add_option("--tol", t4_args.tol_override, "override config tol");
  t4->add_option("--range", t4_args.range_override, "override range lo:hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (coset->parsed()) return run_coset(coset_args);
    if (lap->parsed()) return run_laplacian(lap_args);
    if (dir->parsed()) return run_dirichlet(dir_args);
    if (t2->parsed()) return run_verify_t2(t2_args);
    if (fam->parsed()) return run_family(fam_args);
    if (t4->parsed()) return run_verify_t4(t4_args);
  } catch (const NonSpanningSpec& e) {
    std::cerr << "rejected spec: " << e.what() << "\n";
    return exit_rejected_spec;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
  return exit_config;
}
