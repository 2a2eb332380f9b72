// clutor - cluster-mutation computation of twisted Alexander polynomials and
// non-acyclic Reidemeister torsion for surface mapping tori.
//
// Subcommands:
//   quiver   print the exchange matrix of the n-triangulation quiver
//   map      print the mapping-class action as formulas or as a program
//   torsion  run the full fixed-point / det(tJ - I) / torsion pipeline
//
// Exit codes: 0 success, 2 invalid input, 3 mathematical diagnosis
// (non-convergence, singularity, multiplicity mismatch), 4 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clutor/cluster.hpp"
#include "clutor/torsion.hpp"

using namespace clutor;

namespace {

struct CommonArgs {
  std::string surface = "once-punctured-torus";
  std::string word;
  std::string program_path;  // generic flip program instead of an L/R word
  int rank = 3;
  bool json = false;
  std::string output;
};

// {"flips": [edge,...], "relabel": {"edge_image": [[edge, reversed],...],
//  "tri_image": [[triangle, rotation],...]}}
MappingWord load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read flip program " + path);
  nlohmann::json j;
  try {
    std::stringstream buf;
    buf << in.rdbuf();
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("flip program JSON: ") + e.what());
  }
  if (!j.contains("flips") || !j.contains("relabel"))
    throw ValidationError("flip program JSON: missing flips/relabel");
  std::vector<int> flips;
  for (const auto& f : j["flips"]) flips.push_back(f.get<int>());
  Relabeling relabel;
  for (const auto& e : j["relabel"]["edge_image"])
    relabel.edge_image.emplace_back(e[0].get<int>(), e[1].get<bool>());
  for (const auto& t : j["relabel"]["tri_image"])
    relabel.tri_image.emplace_back(t[0].get<int>(), t[1].get<int>());
  return MappingWord::generic(std::move(flips), std::move(relabel));
}

MappingWord word_of(const CommonArgs& args) {
  if (!args.program_path.empty()) {
    if (!args.word.empty())
      throw ValidationError("--word and --program are mutually exclusive");
    return load_program(args.program_path);
  }
  return MappingWord::torus_word(args.word);
}

Triangulation load_surface(const std::string& name) {
  if (name == "once-punctured-torus") return Triangulation::once_punctured_torus();
  if (name == "four-punctured-sphere") return Triangulation::four_punctured_sphere();
  std::ifstream in(name);
  if (!in)
    throw ValidationError("surface '" + name +
                          "' is neither a builtin nor a readable file");
  std::stringstream buf;
  buf << in.rdbuf();
  Triangulation tri = Triangulation::from_json(buf.str());
  tri.require_valid();
  return tri;
}

void emit(const CommonArgs& args, const std::string& text) {
  if (args.output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(args.output);
  if (!out) throw ValidationError("cannot write to " + args.output);
  out << text;
  if (!text.empty() && text.back() != '\n') out << "\n";
}

int thread_count_from_env() {
  const char* env = std::getenv("CLUTOR_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n > 0 ? n : 1;
}

std::vector<Cplx> parse_point(const std::string& text, int expected) {
  // "re,im;re,im;..." with the imaginary part optional per entry
  std::vector<Cplx> point;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    double re = 0, im = 0;
    std::size_t comma = item.find(',');
    try {
      if (comma == std::string::npos) {
        re = std::stod(item);
      } else {
        re = std::stod(item.substr(0, comma));
        im = std::stod(item.substr(comma + 1));
      }
    } catch (const std::exception&) {
      throw ValidationError("cannot parse seed coordinate '" + item + "'");
    }
    point.emplace_back(re, im);
  }
  if (static_cast<int>(point.size()) != expected)
    throw ValidationError("seed point has " + std::to_string(point.size()) +
                          " coordinates, expected " + std::to_string(expected));
  return point;
}

int run_quiver(const CommonArgs& args) {
  Triangulation tri = load_surface(args.surface);
  tri.require_valid();
  Quiver q = Quiver::build(tri, args.rank);
  auto problems = q.check(tri);
  if (!problems.empty())
    throw InternalConsistencyError("quiver invariant violated: " + problems[0]);
  emit(args, args.json ? q.to_json() : q.to_text());
  return 0;
}

int run_map(const CommonArgs& args, const std::string& mode) {
  Triangulation tri = load_surface(args.surface);
  ClusterMap m = mapping_class_map(tri, word_of(args), args.rank);
  if (mode == "program") {
    emit(args, m.to_json());
    return 0;
  }
  if (mode != "symbolic")
    throw ValidationError("map mode must be symbolic or program");
  SymbolicMap sym = symbolic_map(m);
  if (sym.aborted) {
    std::cerr << "diagnosis: symbolic expansion exceeded the term cap; "
                 "use --mode program for long words\n";
    return 3;
  }
  if (args.json) {
    std::ostringstream out;
    out << "{\n  \"fully_reduced\": " << (sym.fully_reduced ? "true" : "false")
        << ",\n  \"components\": [\n";
    for (std::size_t i = 0; i < sym.components.size(); ++i) {
      out << "    \"" << sym.components[i].to_string() << "\""
          << (i + 1 < sym.components.size() ? "," : "") << "\n";
    }
    out << "  ]\n}";
    emit(args, out.str());
  } else {
    std::ostringstream out;
    for (std::size_t i = 0; i < sym.components.size(); ++i)
      out << "phi*(y" << (i + 1) << ") = " << sym.components[i].to_string()
          << "\n";
    if (!sym.fully_reduced)
      out << "# warning: some components exceeded the reduction term cap\n";
    emit(args, out.str());
  }
  return 0;
}

int run_torsion(const CommonArgs& args, const std::string& mode, long disc,
                const std::string& strategy, const std::string& seed_point,
                int starts, std::uint64_t rng_seed) {
  Triangulation tri = load_surface(args.surface);
  PipelineOptions opts;
  opts.rng_seed = rng_seed;
  opts.starts = starts;
  opts.threads = thread_count_from_env();
  if (mode == "exact") {
    opts.exact_mode = true;
    opts.discriminant = disc;
  } else if (mode != "numeric") {
    throw ValidationError("torsion mode must be numeric or exact");
  }

  if (strategy == "embed") {
    opts.strategy = SeedStrategy::kEmbedRank2;
  } else if (strategy == "multistart") {
    opts.strategy = SeedStrategy::kMultistart;
  } else if (strategy == "point") {
    opts.strategy = SeedStrategy::kExplicit;
  } else {
    throw ValidationError("seed strategy must be embed, multistart or point");
  }

  MappingWord word = word_of(args);
  if (opts.strategy == SeedStrategy::kExplicit) {
    ClusterMap probe = mapping_class_map(tri, word, args.rank);
    opts.explicit_seed = parse_point(seed_point, probe.dim());
  }

  TorsionReport report = full_pipeline(tri, word, args.rank, opts);
  emit(args, args.json ? report.to_json() : report.to_text());
  return report.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cluster-mutation torsion of surface mapping tori"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string mode = "numeric";
  std::string map_mode = "symbolic";
  std::string strategy = "embed";
  std::string seed_point;
  long disc = -3;
  int starts = 100;
  std::uint64_t rng_seed = 20240401;

  auto add_common = [&](CLI::App* cmd, bool with_word) {
    cmd->add_option("--surface", args.surface,
                    "builtin name (once-punctured-torus, "
                    "four-punctured-sphere) or triangulation JSON path");
    if (with_word) {
      cmd->add_option("--word", args.word, "mapping word over L, R");
      cmd->add_option("--program", args.program_path,
                      "generic flip program JSON (flips + final relabeling)");
    }
    cmd->add_option("-n,--rank", args.rank, "rank n >= 2")
        ->check(CLI::Range(2, 64));
    cmd->add_flag("--json", args.json, "machine-readable output");
    cmd->add_option("-o,--output", args.output, "write output to file");
  };

  CLI::App* quiver_cmd = app.add_subcommand("quiver", "print the quiver");
  add_common(quiver_cmd, false);

  CLI::App* map_cmd =
      app.add_subcommand("map", "print the mapping-class cluster action");
  add_common(map_cmd, true);
  map_cmd->add_option("--mode", map_mode, "symbolic | program");

  CLI::App* torsion_cmd = app.add_subcommand(
      "torsion", "fixed point, Alexander polynomial and torsion");
  add_common(torsion_cmd, true);
  torsion_cmd->add_option("--mode", mode, "numeric | exact");
  torsion_cmd->add_option("-d,--discriminant", disc,
                          "square-free d for exact mode (default -3)");
  torsion_cmd->add_option("--seed-strategy", strategy,
                          "embed | multistart | point");
  torsion_cmd->add_option("--seed-point", seed_point,
                          "explicit seed \"re,im;re,im;...\"");
  torsion_cmd->add_option("--starts", starts, "multistart count")
      ->check(CLI::PositiveNumber);
  torsion_cmd->add_option("--rng-seed", rng_seed,
                          "seed for all multistart sampling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (quiver_cmd->parsed()) return run_quiver(args);
    if (map_cmd->parsed()) return run_map(args, map_mode);
    return run_torsion(args, mode, disc, strategy, seed_point, starts,
                       rng_seed);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolveFailure& e) {
    std::cerr << "diagnosis: " << e.what() << "\n";
    return 3;
  } catch (const SingularEvaluation& e) {
    std::cerr << "diagnosis: " << e.what() << "\n";
    return 3;
  } catch (const MultiplicityMismatch& e) {
    std::cerr << "diagnosis: " << e.what() << "\n";
    return 3;
  } catch (const SizeCapExceeded& e) {
    std::cerr << "diagnosis: " << e.what() << "\n";
    return 3;
  } catch (const InternalConsistencyError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
