#include "coderoute/cli.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iomanip>
#include <sstream>

#include "coderoute/compilers.hpp"
#include "coderoute/errors.hpp"
#include "coderoute/evaluators.hpp"
#include "coderoute/io.hpp"
#include "coderoute/qsim.hpp"
#include "coderoute/random_tapes.hpp"

namespace coderoute {

namespace {

constexpr std::size_t kMaxSweepBits = 20;

template <typename F>
void for_each_input(std::size_t left, std::size_t right, F&& f) {
  if (left + right > kMaxSweepBits) {
    throw CapabilityError("enumerating " + std::to_string(left + right) + " input bits exceeds the limit of " +
                          std::to_string(kMaxSweepBits));
  }
  const std::size_t n = left + right;
  for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
    const Bits z = index_to_bits(idx, n);
    f(Bits(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(left)),
      Bits(z.begin() + static_cast<std::ptrdiff_t>(left), z.end()));
  }
}

long long worst_case_cost(const ProtocolTree& tree) {
  long long worst = 0;
  for_each_input(tree.tape().left_bits, tree.tape().right_bits,
                 [&](const Bits& x, const Bits& y) { worst = std::max(worst, entanglement_cost(tree, x, y)); });
  return worst;
}

// Parses comma-separated routing bits such as "x1,!y2,0,1".
std::vector<BitRef> parse_assignment(const std::string& text) {
  std::vector<BitRef> bits;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    token = first == std::string::npos ? "" : token.substr(first, last - first + 1);
    if (token == "0" || token == "1") {
      bits.push_back(BitRef::constant(token == "1" ? Side::Right : Side::Left));
      continue;
    }
    const bool negated = !token.empty() && token[0] == '!';
    const std::string var = negated ? token.substr(1) : token;
    if (var.size() < 2 || (var[0] != 'x' && var[0] != 'y') ||
        var.find_first_not_of("0123456789", 1) != std::string::npos || var.size() > 7) {
      throw ValidationError("bad routing bit '" + token + "' (expected x<i>, y<i>, !x<i>, !y<i>, 0 or 1)");
    }
    const std::size_t index = std::stoul(var.substr(1));
    if (index == 0) throw ValidationError("routing bits are numbered from 1, got '" + token + "'");
    bits.push_back(BitRef::input(var[0] == 'x' ? Side::Left : Side::Right, index, negated));
  }
  if (bits.empty()) throw ValidationError("empty routing-bit assignment");
  return bits;
}

void emit(const std::string& text, const std::string& path, std::ostream& out, const std::string& summary) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
    out << summary << "\n";
  }
}

std::uint8_t single_bit(const std::string& text, const char* name) {
  const Bits b = parse_bits(text);
  if (b.size() != 1) throw ValidationError(std::string(name) + " must be a single bit");
  return b[0];
}

struct Inputs {
  std::string x;
  std::string y;
};

}  // namespace

std::vector<BenchRow> bench_library() {
  struct Entry {
    const char* name;
    const char* formula;
    std::size_t left;
    std::optional<GardenHoseFunction> gh;
  };
  const Entry entries[] = {
      {"AND", "AND(x1,y1)", 1, GardenHoseFunction::And},
      {"OR", "OR(x1,y1)", 1, GardenHoseFunction::Or},
      {"XOR", "OR(AND(x1,NOT(y1)),AND(NOT(x1),y1))", 1, std::nullopt},
      {"MAJ3", "OR(AND(x1,x2),AND(OR(x1,x2),y1))", 2, std::nullopt},
      {"EQ2", "AND(OR(AND(x1,y1),AND(NOT(x1),NOT(y1))),OR(AND(x2,y2),AND(NOT(x2),NOT(y2))))", 2, std::nullopt},
  };
  std::vector<BenchRow> rows;
  for (const auto& e : entries) {
    const SpanProgram sp = library_program(e.name);
    const Formula f = parse_formula(e.formula);
    const ProtocolTree t2 = validate_and_build_tree(compile_theorem2(sp, e.left, sp.num_inputs() - e.left));
    const ProtocolTree tf = validate_and_build_tree(compile_formula(f));
    BenchRow row{e.name, f.to_string(), e.left, f.size(), sp.size(), sp.size() + 1, worst_case_cost(t2),
                 worst_case_cost(tf), std::nullopt};
    if (e.gh) {
      long long worst = 0;
      for (std::uint8_t x = 0; x < 2; ++x) {
        for (std::uint8_t y = 0; y < 2; ++y) {
          const ProtocolTree gh = validate_and_build_tree(compile_garden_hose_example(*e.gh, x, y));
          worst = std::max(worst, entanglement_cost(gh, Bits{x}, Bits{y}));
        }
      }
      row.e_garden_hose = worst;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compile, evaluate and simulate code-routing protocols", "coderoute"};
  app.require_subcommand(1);
  std::function<void()> action;

  // sp
  auto* sp = app.add_subcommand("sp", "Span programs")->require_subcommand(1);
  std::string sp_file;
  std::string sp_input;
  std::string out_file;

  auto* sp_eval = sp->add_subcommand("eval", "Evaluate a span program on one input");
  sp_eval->add_option("file", sp_file, "Span-program JSON")->required();
  sp_eval->add_option("--input", sp_input, "Input bits z_1..z_n")->required();
  sp_eval->callback([&] {
    action = [&] {
      const SpanProgram p = load_program_file(read_text_file(sp_file)).program;
      out << (evaluate(p, parse_bits(sp_input)) ? 1 : 0) << "\n";
    };
  });

  auto* sp_table = sp->add_subcommand("table", "Print the full truth table");
  sp_table->add_option("file", sp_file, "Span-program JSON")->required();
  sp_table->callback([&] {
    action = [&] {
      const SpanProgram p = load_program_file(read_text_file(sp_file)).program;
      const auto table = truth_table(p);
      for (std::size_t i = 0; i < table.size(); ++i) {
        out << format_bits(index_to_bits(i, p.num_inputs())) << " " << int(table[i]) << "\n";
      }
    };
  });

  auto* sp_dec = sp->add_subcommand("decompose", "Monotone indicator program with its map g");
  sp_dec->add_option("file", sp_file, "Span-program JSON")->required();
  sp_dec->add_option("-o,--output", out_file, "Where to write the monotone program");
  sp_dec->callback([&] {
    action = [&] {
      const DecompositionResult d = decompose(load_program_file(read_text_file(sp_file)).program);
      std::string g;
      for (const auto& bit : d.g_map) {
        g += (g.empty() ? "" : ",") + std::string(bit.negated ? "!" : "") + "z" + std::to_string(bit.source);
      }
      emit(decomposition_to_json(d), out_file, out,
           "original_size=" + std::to_string(d.original_size) + " msp_size=" + std::to_string(d.msp_size) +
               " inputs=" + std::to_string(d.msp.num_inputs()) + " g=(" + g + ")");
    };
  });

  // compile
  auto* comp = app.add_subcommand("compile", "Build protocol tapes")->require_subcommand(1);
  std::size_t left_len = 0;
  std::size_t right_len = 0;
  std::string expr;
  std::string assignment;
  std::string gh_name;
  std::string gh_x;
  std::string gh_y;
  auto tape_summary = [&](const ProtocolTape& tape) {
    const ProtocolTree tree = validate_and_build_tree(tape);
    emit(tape_to_json(tape), out_file, out,
         "wrote " + out_file + ": " + std::to_string(tape.records.size()) + " records, H=" +
             std::to_string(size_h(tree)) + " H~=" + std::to_string(weighted_size(tree)));
  };

  auto* c_t2 = comp->add_subcommand("theorem2", "General protocol from any span program");
  c_t2->add_option("file", sp_file, "Span-program JSON")->required();
  c_t2->add_option("--left", left_len, "Number of inputs taken from x")->required();
  c_t2->add_option("--right", right_len, "Number of inputs taken from y")->required();
  c_t2->add_option("-o,--output", out_file, "Tape file to write");
  c_t2->callback([&] {
    action = [&] {
      tape_summary(compile_theorem2(load_program_file(read_text_file(sp_file)).program, left_len, right_len));
    };
  });

  auto* c_f = comp->add_subcommand("formula", "Concatenated 2-of-3 codes for a Boolean formula");
  c_f->add_option("expr", expr, "Formula, e.g. AND(NOT(x1),OR(x1,y1))")->required();
  c_f->add_option("-o,--output", out_file, "Tape file to write");
  c_f->callback([&] { action = [&] { tape_summary(compile_formula(parse_formula(expr))); }; });

  auto* c_ind = comp->add_subcommand("indicator", "Single Smith code routed on the given bits");
  c_ind->add_option("file", sp_file, "Monotone span-program JSON")->required();
  c_ind->add_option("--bits", assignment, "One routing bit per share: x1,!y2,0,1,...")->required();
  c_ind->add_option("-o,--output", out_file, "Tape file to write");
  c_ind->callback([&] {
    action = [&] {
      const auto bits = parse_assignment(assignment);
      tape_summary(compile_theorem1_indicator(load_program_file(read_text_file(sp_file)).program, bits));
    };
  });

  auto* c_gh = comp->add_subcommand("gh", "Garden-hose AND/OR strategy for fixed inputs");
  c_gh->add_option("function", gh_name, "AND or OR")->required();
  c_gh->add_option("--x", gh_x, "Left bit")->required();
  c_gh->add_option("--y", gh_y, "Right bit")->required();
  c_gh->add_option("-o,--output", out_file, "Tape file to write");
  c_gh->callback([&] {
    action = [&] {
      tape_summary(compile_garden_hose_example(parse_garden_hose_function(gh_name), single_bit(gh_x, "--x"),
                                               single_bit(gh_y, "--y")));
    };
  });

  // tape
  auto* tape_cmd = app.add_subcommand("tape", "Evaluate protocol tapes")->require_subcommand(1);
  std::string tape_file;
  Inputs in;
  std::string evaluator = "getowner";
  std::uint32_t modulus = 0;

  auto* t_eval = tape_cmd->add_subcommand("eval", "Side on which Q ends up recoverable");
  t_eval->add_option("file", tape_file, "Tape JSON")->required();
  t_eval->add_option("--x", in.x, "Left input bits")->required();
  t_eval->add_option("--y", in.y, "Right input bits")->required();
  t_eval->add_option("--evaluator", evaluator, "getowner, modp or depthfirst")
      ->check(CLI::IsMember({"getowner", "modp", "depthfirst"}));
  t_eval->add_option("--p", modulus, "Prime for the modp evaluator (default: tape base)");
  t_eval->callback([&] {
    action = [&] {
      const ProtocolTree tree = validate_and_build_tree(tape_from_json(read_text_file(tape_file)));
      const Bits x = parse_bits(in.x);
      const Bits y = parse_bits(in.y);
      if (evaluator == "getowner") {
        const OwnerResult r = get_owner(tree, x, y);
        out << "owner=" << int(r.owner) << " evaluator=getowner row_ops=" << r.row_ops
            << " row_op_bound=" << r.row_op_bound << "\n";
      } else if (evaluator == "modp") {
        const std::uint32_t p = modulus ? modulus : tree.base();
        out << "owner=" << int(eval_modp(tree, x, y, p)) << " evaluator=modp p=" << p << "\n";
      } else {
        const DepthFirstResult r = eval_depth_first(tree, x, y);
        out << "owner=" << int(r.owner) << " evaluator=depthfirst peak_R=" << r.peak_overrides
            << " steps=" << r.steps << " prunes=" << r.prunes << "\n";
      }
    };
  });

  auto* t_cost = tape_cmd->add_subcommand("cost", "Entanglement cost and protocol-tree sizes");
  t_cost->add_option("file", tape_file, "Tape JSON")->required();
  auto* cx = t_cost->add_option("--x", in.x, "Left input bits");
  auto* cy = t_cost->add_option("--y", in.y, "Right input bits");
  cx->needs(cy);
  cy->needs(cx);
  t_cost->callback([&] {
    action = [&] {
      const ProtocolTree tree = validate_and_build_tree(tape_from_json(read_text_file(tape_file)));
      if (*cx) {
        out << "E=" << entanglement_cost(tree, parse_bits(in.x), parse_bits(in.y));
      } else {
        out << "E_max=" << worst_case_cost(tree);
      }
      out << " H=" << size_h(tree) << " H~=" << weighted_size(tree) << "\n";
    };
  });

  // qsim
  auto* qsim = app.add_subcommand("qsim", "State-vector verification of small tapes")->require_subcommand(1);
  std::optional<std::uint64_t> seed_flag;
  auto qsim_options = [&] {
    QsimOptions o;
    o.seed = seed_flag ? *seed_flag : seed_from_environment();
    return o;
  };
  auto* q_run = qsim->add_subcommand("run", "Simulate one input pair");
  q_run->add_option("file", tape_file, "Tape JSON")->required();
  q_run->add_option("--x", in.x, "Left input bits")->required();
  q_run->add_option("--y", in.y, "Right input bits")->required();
  q_run->add_option("--seed", seed_flag, "Measurement RNG seed (default: CODEROUTE_SEED)");
  q_run->callback([&] {
    action = [&] {
      const ProtocolTree tree = validate_and_build_tree(tape_from_json(read_text_file(tape_file)));
      out << report_to_json(run_quantum_tape(tree, parse_bits(in.x), parse_bits(in.y), qsim_options())) << "\n";
    };
  });
  auto* q_sweep = qsim->add_subcommand("sweep", "Simulate every input pair");
  q_sweep->add_option("file", tape_file, "Tape JSON")->required();
  q_sweep->add_option("--seed", seed_flag, "Measurement RNG seed (default: CODEROUTE_SEED)");
  q_sweep->callback([&] {
    action = [&] {
      const ProtocolTree tree = validate_and_build_tree(tape_from_json(read_text_file(tape_file)));
      const QsimOptions opts = qsim_options();
      for_each_input(tree.tape().left_bits, tree.tape().right_bits, [&](const Bits& x, const Bits& y) {
        out << report_to_json(run_quantum_tape(tree, x, y, opts)) << "\n";
      });
    };
  });

  // bench
  auto* bench = app.add_subcommand("bench", "Cost tables")->require_subcommand(1);
  bench->add_subcommand("library", "Compare compilers on the built-in functions")->callback([&] {
    action = [&] {
      out << std::left << std::setw(6) << "name" << std::right << std::setw(6) << "split" << std::setw(14)
          << "formula_size" << std::setw(11) << "span_size" << std::setw(10) << "msp_size" << std::setw(12)
          << "E_general" << std::setw(11) << "E_formula" << std::setw(6) << "E_gh" << "\n";
      for (const auto& row : bench_library()) {
        out << std::left << std::setw(6) << row.name << std::right << std::setw(6)
            << (std::to_string(row.left_bits) + "|" +
                std::to_string(library_program(row.name).num_inputs() - row.left_bits))
            << std::setw(14) << row.formula_size << std::setw(11) << row.span_size << std::setw(10) << row.msp_size
            << std::setw(12) << row.e_general << std::setw(11) << row.e_formula << std::setw(6)
            << (row.e_garden_hose ? std::to_string(*row.e_garden_hose) : "-") << "\n";
      }
    };
  });

  std::vector<const char*> argv{"coderoute"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (action) action();
    return 0;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace coderoute
