// wtri: command-line front end for the weak triangularizability toolkit.
//
// Exit codes: 0 ok, 1 error, 2 not weakly triangularizable,
// 3 theorem violation, 4 budget exceeded.

#include <wtri/wtri.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace wtri;

namespace {

constexpr int kOk = 0, kError = 1, kNotWT = 2, kViolation = 3, kBudget = 4;
constexpr std::uint64_t kDefaultSeed = 1;

MatSpace load_space(const std::string& path) {
  std::size_t line = 0;
  if (path == "-") {
    try {
      return read_space(std::cin, false, &line);
    } catch (const ParseError& e) {
      throw ParseError(std::string("<stdin>:") + e.what());
    }
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return read_space(in, false, &line);
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + e.what());
  }
}

void header(std::ostream& os, const std::string& command, const MatSpace& S) {
  os << "# command: " << command << "\n";
  os << "# field: " << S.field().descriptor() << "\n";
  os << "# n: " << S.n() << "\n";
  os << "# dim: " << S.dim() << "\n";
}

std::string vec_text(const Vec& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

SweepMode parse_mode(const std::string& text, std::uint64_t budget) {
  if (text == "exhaustive") return SweepMode::exhaustive(budget);
  if (text.rfind("sample:", 0) == 0) {
    const auto rest = text.substr(7);
    const auto colon = rest.find(':');
    try {
      if (colon == std::string::npos) return SweepMode::sample(std::stoull(rest), kDefaultSeed);
      return SweepMode::sample(std::stoull(rest.substr(0, colon)), std::stoull(rest.substr(colon + 1)));
    } catch (const std::logic_error&) {
    }
  }
  throw PreconditionError("mode must be 'exhaustive' or 'sample:N:SEED', got '" + text + "'");
}

// One block of a joint: kind:size, kind in triangular|sym|sl|full|scalar.
MatSpace parse_block(const std::string& text, const Field& F) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::size_t m = 1;
  if (colon != std::string::npos) {
    try {
      m = std::stoul(text.substr(colon + 1));
    } catch (const std::logic_error&) {
      throw PreconditionError("bad block size in '" + text + "'");
    }
  }
  if (m == 0) throw PreconditionError("block size must be positive");
  if (kind == "triangular") return gen_triangular(m, F);
  if (kind == "sym") return gen_sym(m, F);
  if (kind == "sl") return gen_sl(m, F);
  if (kind == "full") return MatSpace::full(F, m);
  if (kind == "scalar") return MatSpace::span(F, m, {Mat::identity(F, m)});
  throw PreconditionError("unknown block kind '" + kind + "'");
}

struct Options {
  std::uint64_t budget = kDefaultSweepBudget;
  bool exploratory = false;

  std::string input = "-";
  std::string mode = "exhaustive";
  std::string trace_path;
  std::uint64_t precheck = RecoverOptions{}.precondition_budget;
  bool reverse = false;

  std::string field;
  std::size_t degree = 0;
  std::size_t n = 0;
  std::size_t dim = 0;
  bool identity = false;
  unsigned shards = 1;
  unsigned threads = 1;
  std::string journal;
  bool resume = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = kDefaultSeed;
  bool timing = false;
  bool spaces = false;

  std::string kind;
  std::string blocks;
  std::optional<std::uint64_t> conjugate;
};

int cmd_check(const Options& o) {
  const auto S = load_space(o.input);
  const auto mode = parse_mode(o.mode, o.budget);
  const auto v = space_weakly_triangularizable(S, mode);
  header(std::cout, "check", S);
  if (mode.kind == SweepMode::Kind::Exhaustive) {
    std::cout << "# mode: exhaustive\n";
  } else {
    std::cout << "# mode: sample\n# samples: " << mode.samples << "\n# seed: " << mode.seed << "\n";
  }
  std::cout << "# checked: " << v.checked << "\n";
  switch (v.kind) {
    case Verdict::Kind::True:
      std::cout << "# verdict: weakly-triangularizable\n";
      return kOk;
    case Verdict::Kind::NoCounterexample:
      std::cout << "# verdict: no-counterexample\n";
      return kOk;
    case Verdict::Kind::False:
      std::cout << "# verdict: not-weakly-triangularizable\n";
      std::cout << "witness " << v.witness->to_string() << "\n";
      return kNotWT;
  }
  return kError;
}

int cmd_recover(const Options& o) {
  const auto S = load_space(o.input);
  RecoverOptions opt;
  opt.reverse_scan = o.reverse;
  opt.precondition_budget = o.precheck;
  auto [flag, trace] = recover_flag(S, opt);
  if (S.n() >= 3) trace.maps = extract_structure_maps(S, flag).maps;
  header(std::cout, "recover", S);
  std::cout << "# status: " << (trace.ok() ? "ok" : "FAILED") << "\n";
  for (std::size_t i = 0; i < flag.n(); ++i) std::cout << "e" << (i + 1) << " " << vec_text(flag.basis()[i]) << "\n";
  if (o.trace_path.empty()) {
    std::cout << "\n" << trace.to_text();
  } else {
    std::ofstream out(o.trace_path);
    if (!out) throw Error("cannot write " + o.trace_path);
    out << trace.to_text();
  }
  return trace.ok() ? kOk : kViolation;
}

int cmd_adapted(const Options& o) {
  const auto S = load_space(o.input);
  header(std::cout, "adapted", S);
  const auto x = find_adapted_vector(S, o.reverse);
  std::cout << (x ? vec_text(*x) : "none") << "\n";
  return kOk;
}

int cmd_lemma(const Options& o) {
  const Field F = Field::parse(o.field, o.exploratory);
  std::cout << "# command: pencil\n# field: " << F.descriptor() << "\n# degree: " << o.degree << "\n";
  if (F.q() == 2) {
    // the lemma needs |F| > 2; over GF(2) report the odd-degree counterexample instead
    const auto r = f2_counterexample(o.degree);
    std::cout << "counterexample p = " << r.p.to_string() << ", q = " << r.q.to_string() << ": hypothesis "
              << (r.hypothesis_holds ? "holds" : "fails") << ", q " << (r.q_divides_p ? "divides" : "does not divide")
              << " p\n";
    return r.confirmed() ? kOk : kViolation;
  }
  const auto r = verify_pencil_lemma(F, o.degree, o.threads, o.budget);
  std::cout << "# hypothesis_pairs: " << r.hypothesis_pairs << "\n";
  std::cout << r.pairs_checked << " pairs, " << r.violations.size() << " violations\n";
  for (const auto& [p, q] : r.violations) std::cout << "violation p = " << p.to_string() << ", q = " << q.to_string() << "\n";
  return r.violations.empty() ? kOk : kViolation;
}

int cmd_campaign(const Options& o) {
  CampaignSpec spec;
  spec.n = o.n;
  spec.field = Field::parse(o.field, o.exploratory);
  spec.dim = o.dim;
  spec.contains_identity = o.identity;
  spec.shards = o.shards;
  spec.threads = o.threads;
  spec.budget = o.budget;
  spec.journal = o.journal;
  spec.resume = o.resume;
  if (o.samples) {
    spec.mode = CampaignSpec::Mode::Random;
    spec.samples = o.samples;
    spec.seed = o.seed;
  }
  const auto rep = run_campaign(spec);
  std::cout << rep.to_text(o.timing, o.spaces);
  if (rep.alarms()) {
    for (const auto& h : rep.hits) {
      if (!h.alarm.empty()) std::cerr << "hit " << h.index << ": " << h.alarm << "\n";
    }
    return kViolation;
  }
  return !spec.optimal() || rep.all_recovered() ? kOk : kViolation;
}

int cmd_gen(const Options& o) {
  const Field F = Field::parse(o.field, o.exploratory);
  MatSpace S;
  std::ostringstream meta;
  meta << "# kind: " << o.kind << "\n";
  if (o.kind == "joint") {
    if (o.blocks.empty()) throw PreconditionError("joint needs --blocks, e.g. sym:2,triangular:1");
    std::vector<MatSpace> parts;
    std::stringstream ss(o.blocks);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(parse_block(item, F));
    S = gen_joint(parts);
    meta << "# blocks: " << o.blocks << "\n";
  } else {
    if (o.n == 0) throw PreconditionError("--n is required");
    if (o.kind == "triangular") {
      std::optional<Mat> P;
      if (o.conjugate) {
        std::mt19937_64 rng(*o.conjugate);
        P = random_invertible(o.n, F, rng);
        meta << "# conjugate_seed: " << *o.conjugate << "\n";
      }
      S = gen_triangular(o.n, F, P);
    } else if (o.kind == "sym") {
      S = gen_sym(o.n, F);
    } else if (o.kind == "sl") {
      S = gen_sl(o.n, F);
    } else if (o.kind == "random") {
      S = gen_random(o.n, F, o.dim, o.seed);
      meta << "# seed: " << o.seed << "\n";
    } else {
      throw PreconditionError("unknown kind '" + o.kind + "'");
    }
  }
  std::cout << meta.str();
  write_space(std::cout, S);
  return kOk;
}

int cmd_flags(const Options& o) {
  const Field F = Field::parse(o.field, o.exploratory);
  std::cout << "# command: flags\n# field: " << F.descriptor() << "\n# n: " << o.n << "\n";
  std::cout << count_flags(o.n, F) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly triangularizable matrix spaces over finite fields"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--budget", o.budget, "Cap on swept elements or candidates")->envname("WTRI_BUDGET");
  app.add_flag("--exploratory", o.exploratory, "Allow characteristic 2");

  auto* check = app.add_subcommand("check", "Decide weak triangularizability of a space");
  check->add_option("spacefile", o.input, "Space file, - for standard input");
  check->add_option("--mode", o.mode, "exhaustive or sample:N:SEED");

  auto* recover = app.add_subcommand("recover", "Recover the flag of an optimal space");
  recover->add_option("spacefile", o.input, "Space file, - for standard input");
  recover->add_option("--trace", o.trace_path, "Write the recovery trace here instead of standard output");
  recover->add_option("--precheck", o.precheck, "Largest space swept to confirm the precondition");
  recover->add_flag("--reverse-scan", o.reverse, "Scan adapted vectors in reverse order");

  auto* adapted = app.add_subcommand("adapted", "First adapted vector of a space");
  adapted->add_option("spacefile", o.input, "Space file, - for standard input");
  adapted->add_flag("--reverse-scan", o.reverse, "Scan in reverse order");

  auto* lemma = app.add_subcommand("pencil", "Sweep the pencil divisibility lemma");
  lemma->alias("lemma31");
  lemma->add_option("--field", o.field, "Field descriptor, e.g. GF(9)")->required();
  lemma->add_option("--degree", o.degree, "Degree of p")->required();
  lemma->add_option("--threads", o.threads, "Worker threads");

  auto* campaign = app.add_subcommand("campaign", "Enumerate subspaces and verify every hit");
  campaign->add_option("--n", o.n, "Matrix size")->required();
  campaign->add_option("--field", o.field, "Field descriptor")->required();
  campaign->add_option("--dim", o.dim, "Subspace dimension, 0 for n(n+1)/2");
  campaign->add_flag("--contains-identity", o.identity, "Only subspaces containing the identity");
  campaign->add_option("--shards", o.shards, "Number of shards");
  campaign->add_option("--threads", o.threads, "Worker threads (default: one per shard)");
  campaign->add_option("--journal", o.journal, "Append completed shards to this file");
  campaign->add_flag("--resume", o.resume, "Skip shards already in the journal");
  campaign->add_option("--random", o.samples, "Sample this many random candidates instead");
  campaign->add_option("--seed", o.seed, "Seed for --random");
  campaign->add_flag("--timing", o.timing, "Include wall-clock times");
  campaign->add_flag("--spaces", o.spaces, "Print each hit's basis");

  auto* gen = app.add_subcommand("gen", "Write a space file to standard output");
  gen->add_option("--kind", o.kind, "triangular, sym, sl, joint or random")
      ->required()
      ->check(CLI::IsMember({"triangular", "sym", "sl", "joint", "random"}));
  gen->add_option("--n", o.n, "Matrix size");
  gen->add_option("--field", o.field, "Field descriptor")->required();
  gen->add_option("--dim", o.dim, "Dimension for random");
  gen->add_option("--seed", o.seed, "Seed for random");
  gen->add_option("--conjugate", o.conjugate, "Conjugate triangular by a random invertible matrix from this seed");
  gen->add_option("--blocks", o.blocks, "Joint blocks, e.g. sym:2,triangular:1");

  auto* flags = app.add_subcommand("flags", "Count complete flags");
  flags->add_option("--n", o.n, "Dimension")->required();
  flags->add_option("--field", o.field, "Field descriptor")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }
  if (campaign->parsed() && !campaign->count("--threads")) o.threads = o.shards;

  try {
    if (check->parsed()) return cmd_check(o);
    if (recover->parsed()) return cmd_recover(o);
    if (adapted->parsed()) return cmd_adapted(o);
    if (lemma->parsed()) return cmd_lemma(o);
    if (campaign->parsed()) return cmd_campaign(o);
    if (gen->parsed()) return cmd_gen(o);
    if (flags->parsed()) return cmd_flags(o);
  } catch (const NotWeaklyTriangularizable& e) {
    std::cout << "# verdict: not-weakly-triangularizable\nwitness " << e.witness.to_string() << "\n";
    std::cerr << "wtri: " << e.what() << "\n";
    return kNotWT;
  } catch (const TheoremViolation& e) {
    std::cerr << "wtri: " << e.what() << "\n" << e.trace;
    return kViolation;
  } catch (const BudgetExceeded& e) {
    std::cerr << "wtri: budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "wtri: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
