#include "coderoute/io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "coderoute/errors.hpp"

namespace coderoute {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

namespace {

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

void check_keys(const json& obj, const std::string& ctx, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) throw ValidationError(ctx + " must be a JSON object");
  for (const char* k : required) {
    if (!obj.contains(k)) throw ValidationError(ctx + " is missing \"" + k + "\"");
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw ValidationError(ctx + " has unexpected field \"" + key + "\"");
  }
}

std::uint64_t get_uint(const json& obj, const char* key, const std::string& ctx) {
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ValidationError(ctx + ": \"" + key + "\" must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& ctx) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(ctx + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const char* key, const std::string& ctx) {
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ValidationError(ctx + ": \"" + key + "\" must be true or false");
  return v.get<bool>();
}

std::vector<Scalar> get_scalars(const json& obj, const char* key, std::uint64_t p, const std::string& ctx) {
  const json& v = obj.at(key);
  if (!v.is_array()) throw ValidationError(ctx + ": \"" + key + "\" must be an array");
  std::vector<Scalar> out;
  for (const auto& e : v) {
    if (!e.is_number_unsigned()) throw ValidationError(ctx + ": \"" + key + "\" entries must be non-negative integers");
    const auto value = e.get<std::uint64_t>();
    if (value >= p) {
      throw ValidationError(ctx + ": entry " + std::to_string(value) + " in \"" + key + "\" is not reduced mod " +
                            std::to_string(p));
    }
    out.push_back(static_cast<Scalar>(value));
  }
  return out;
}

ojson program_object(const SpanProgram& sp) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const auto row = sp.matrix().row(i);
    rows.push_back({{"coeffs", std::vector<Scalar>(row.begin(), row.end())},
                    {"input", sp.labels()[i].input},
                    {"epsilon", sp.labels()[i].epsilon}});
  }
  return {{"p", sp.modulus()},
          {"num_inputs", sp.num_inputs()},
          {"target", std::vector<Scalar>(sp.target().begin(), sp.target().end())},
          {"rows", std::move(rows)}};
}

SpanProgram program_from(const json& obj, const std::string& ctx, bool allow_decomposition = false) {
  if (allow_decomposition) {
    check_keys(obj, ctx, {"p", "num_inputs", "target", "rows"}, {"decomposition"});
  } else {
    check_keys(obj, ctx, {"p", "num_inputs", "target", "rows"});
  }
  const std::uint64_t p = get_uint(obj, "p", ctx);
  if (p >= (std::uint64_t{1} << 31) || !is_prime(p)) {
    throw ValidationError(ctx + ": p = " + std::to_string(p) + " is not a prime below 2^31");
  }
  const std::uint64_t n = get_uint(obj, "num_inputs", ctx);
  std::vector<Scalar> target = get_scalars(obj, "target", p, ctx);
  if (target.empty()) throw ValidationError(ctx + ": target must have at least one entry");
  const json& rows = obj.at("rows");
  if (!rows.is_array()) throw ValidationError(ctx + ": \"rows\" must be an array");

  FieldMatrix m(static_cast<std::uint32_t>(p), 0, target.size());
  std::vector<RowLabel> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string rctx = ctx + " row " + std::to_string(i + 1);
    check_keys(rows[i], rctx, {"coeffs", "input", "epsilon"});
    const auto coeffs = get_scalars(rows[i], "coeffs", p, rctx);
    if (coeffs.size() != target.size()) {
      throw ValidationError(rctx + " has " + std::to_string(coeffs.size()) + " coefficients, target has " +
                            std::to_string(target.size()));
    }
    m.append_row(coeffs);
    const std::uint64_t eps = get_uint(rows[i], "epsilon", rctx);
    if (eps > 1) throw ValidationError(rctx + ": epsilon must be 0 or 1");
    labels.push_back({get_uint(rows[i], "input", rctx), static_cast<std::uint8_t>(eps)});
  }
  return SpanProgram(std::move(m), std::move(labels), std::move(target), n);
}

ojson bit_object(const BitRef& bit) {
  if (bit.is_constant()) return {{"const", side_bit(bit.side)}};
  return {{"side", to_string(bit.side)}, {"index", bit.index}, {"negated", bit.negated}};
}

BitRef bit_from(const json& obj, const std::string& ctx) {
  if (obj.is_object() && obj.contains("const")) {
    check_keys(obj, ctx, {"const"});
    const std::uint64_t v = get_uint(obj, "const", ctx);
    if (v > 1) throw ValidationError(ctx + ": \"const\" must be 0 or 1");
    return BitRef::constant(side_from_bit(static_cast<std::uint8_t>(v)));
  }
  check_keys(obj, ctx, {"side", "index"}, {"negated"});
  const std::uint64_t index = get_uint(obj, "index", ctx);
  if (index == 0) throw ValidationError(ctx + ": bit indices start at 1");
  const bool negated = obj.contains("negated") && get_bool(obj, "negated", ctx);
  return BitRef::input(parse_side(get_string(obj, "side", ctx)), index, negated);
}

}  // namespace

std::string span_program_to_json(const SpanProgram& sp) { return program_object(sp).dump(2) + "\n"; }

SpanProgram span_program_from_json(std::string_view text) {
  return program_from(parse_json(text, "span program"), "span program");
}

std::string decomposition_to_json(const DecompositionResult& result) {
  ojson obj = program_object(result.msp);
  ojson g = ojson::array();
  for (const auto& bit : result.g_map) g.push_back({{"source", bit.source}, {"negated", bit.negated}});
  obj["decomposition"] = {
      {"original_size", result.original_size}, {"msp_size", result.msp_size}, {"g", std::move(g)}};
  return obj.dump(2) + "\n";
}

LoadedProgram load_program_file(std::string_view text) {
  const json obj = parse_json(text, "span program");
  LoadedProgram loaded{program_from(obj, "span program", true), std::nullopt};
  if (!obj.contains("decomposition")) return loaded;

  const std::string ctx = "decomposition";
  const json& d = obj.at("decomposition");
  check_keys(d, ctx, {"original_size", "msp_size", "g"});
  std::vector<GBit> g;
  const json& gs = d.at("g");
  if (!gs.is_array()) throw ValidationError(ctx + ": \"g\" must be an array");
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const std::string gctx = ctx + " g entry " + std::to_string(i + 1);
    check_keys(gs[i], gctx, {"source", "negated"});
    g.push_back({get_uint(gs[i], "source", gctx), get_bool(gs[i], "negated", gctx)});
  }
  if (g.size() != loaded.program.num_inputs()) {
    throw ValidationError(ctx + ": g has " + std::to_string(g.size()) + " entries but the program has " +
                          std::to_string(loaded.program.num_inputs()) + " inputs");
  }
  loaded.decomposition = DecompositionResult{loaded.program, std::move(g), get_uint(d, "original_size", ctx),
                                             get_uint(d, "msp_size", ctx)};
  return loaded;
}

std::string tape_to_json(const ProtocolTape& tape) {
  ojson records = ojson::array();
  for (const auto& rec : tape.records) {
    ojson r = {{"input", rec.input}, {"outputs", rec.outputs}, {"kind", to_string(rec.kind())}};
    if (const auto* u = std::get_if<UnitRoute>(&rec.op)) r["bit"] = bit_object(u->bit);
    if (const auto* t = std::get_if<Teleport>(&rec.op)) r["to_side"] = to_string(t->to);
    if (const auto* e = std::get_if<Encode>(&rec.op)) {
      if (e->code.variant == CodeSpec::Variant::Threshold23) {
        r["code"] = {{"variant", "threshold23"}};
      } else {
        r["code"] = {{"variant", "smith"}, {"span_program", program_object(*e->code.msp)}};
      }
    }
    records.push_back(std::move(r));
  }
  ojson obj = {{"base", tape.base},
               {"left_bits", tape.left_bits},
               {"right_bits", tape.right_bits},
               {"root", {{"id", tape.root.id}, {"log_dim", tape.root.log_dim}}},
               {"records", std::move(records)}};
  if (tape.idle_epr_pairs > 0) obj["idle_epr_pairs"] = tape.idle_epr_pairs;
  return obj.dump(2) + "\n";
}

ProtocolTape tape_from_json(std::string_view text) {
  const json obj = parse_json(text, "tape");
  const std::string ctx = "tape";
  check_keys(obj, ctx, {"base", "left_bits", "right_bits", "root", "records"}, {"idle_epr_pairs"});

  ProtocolTape tape;
  const std::uint64_t base = get_uint(obj, "base", ctx);
  if (base >= (std::uint64_t{1} << 31)) throw ValidationError("tape base is too large");
  tape.base = static_cast<std::uint32_t>(base);
  tape.left_bits = get_uint(obj, "left_bits", ctx);
  tape.right_bits = get_uint(obj, "right_bits", ctx);
  if (obj.contains("idle_epr_pairs")) tape.idle_epr_pairs = get_uint(obj, "idle_epr_pairs", ctx);

  const json& root = obj.at("root");
  check_keys(root, "tape root", {"id", "log_dim"});
  tape.root.id = get_string(root, "id", "tape root");
  const std::uint64_t log_dim = get_uint(root, "log_dim", "tape root");
  if (log_dim > 64) throw ValidationError("tape root: log_dim is too large");
  tape.root.log_dim = static_cast<int>(log_dim);

  const json& records = obj.at("records");
  if (!records.is_array()) throw ValidationError("tape: \"records\" must be an array");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const json& r = records[i];
    const std::string rctx = "record " + std::to_string(i + 1);
    if (!r.is_object() || !r.contains("kind")) throw ValidationError(rctx + " is missing \"kind\"");
    const std::string kind = get_string(r, "kind", rctx);
    ShareRecord rec;
    if (kind == "unit-route") {
      check_keys(r, rctx, {"input", "outputs", "kind", "bit"});
      rec.op = UnitRoute{bit_from(r.at("bit"), rctx + " bit")};
    } else if (kind == "teleport") {
      check_keys(r, rctx, {"input", "outputs", "kind", "to_side"});
      rec.op = Teleport{parse_side(get_string(r, "to_side", rctx))};
    } else if (kind == "encode") {
      check_keys(r, rctx, {"input", "outputs", "kind", "code"});
      const json& code = r.at("code");
      const std::string cctx = rctx + " code";
      if (!code.is_object() || !code.contains("variant")) throw ValidationError(cctx + " is missing \"variant\"");
      const std::string variant = get_string(code, "variant", cctx);
      if (variant == "threshold23") {
        check_keys(code, cctx, {"variant"});
        rec.op = Encode{CodeSpec::threshold23()};
      } else if (variant == "smith") {
        check_keys(code, cctx, {"variant", "span_program"});
        rec.op = Encode{CodeSpec::smith(program_from(code.at("span_program"), cctx + " span program"))};
      } else {
        throw ValidationError(cctx + ": unknown variant '" + variant + "'");
      }
    } else {
      throw ValidationError(rctx + ": unknown kind '" + kind + "'");
    }
    rec.input = get_string(r, "input", rctx);
    const json& outs = r.at("outputs");
    if (!outs.is_array()) throw ValidationError(rctx + ": \"outputs\" must be an array");
    for (const auto& o : outs) {
      if (!o.is_string()) throw ValidationError(rctx + ": outputs must be strings");
      rec.outputs.push_back(o.get<std::string>());
    }
    tape.records.push_back(std::move(rec));
  }
  return tape;
}

}  // namespace coderoute
