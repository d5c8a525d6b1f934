#include "mahler/cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "mahler/errors.hpp"
#include "mahler/extremal.hpp"
#include "mahler/heights.hpp"
#include "mahler/projections.hpp"
#include "mahler/quotient.hpp"

#ifndef MAHLER_FIXTURE_DIR
#define MAHLER_FIXTURE_DIR "fixtures"
#endif

namespace mahler::cli {

using nlohmann::json;

namespace {

struct Options {
  std::string fixture;
  std::string element;
  std::string p = "1";
  std::string subfield;
  std::string sprimes;
  unsigned precision = kDefaultPrecisionBits;
  double tol = 1e-9;
  bool json = false;
};

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::filesystem::path resolve_fixture(const std::string& name) {
  if (name.empty()) throw ValidationError("--fixture is required");
  if (std::filesystem::exists(name)) return name;
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  std::vector<std::filesystem::path> dirs;
  if (const char* env = std::getenv("MAHLER_FIXTURES")) dirs.emplace_back(env);
  dirs.emplace_back(MAHLER_FIXTURE_DIR);
  for (const auto& d : dirs) {
    for (const auto& candidate : {d / (lower + ".json"), d / lower}) {
      if (std::filesystem::exists(candidate)) return candidate;
    }
  }
  throw ValidationError("fixture '" + name + "' not found");
}

json ball_json(const Ball& b) { return {{"mid", b.mid_string(30)}, {"rad", b.rad_string()}}; }

json vector_json(const FieldFixture& fix, const LogVector& v) {
  json out = json::array();
  for (const auto& p : fix.places()) {
    json e = {{"place", p.id}, {"over", p.over()}, {"log_abs", ball_json(v[p.id])}};
    if (v.has_exact_valuations() && !p.archimedean()) e["ord"] = to_string(v.valuations()[static_cast<size_t>(p.id)]);
    out.push_back(std::move(e));
  }
  return out;
}

json coords_json(const std::optional<std::vector<Rational>>& c) {
  if (!c) return nullptr;
  json out = json::array();
  for (const auto& q : *c) out.push_back(to_string(q));
  return out;
}

double parse_p(const std::string& p) {
  if (p == "inf" || p == "INF" || p == "infinity") return kInfinity;
  if (p == "1") return 1;
  if (p == "2") return 2;
  throw CLI::ValidationError("--p", "must be one of 1, 2, inf");
}

const SubfieldDescriptor& pick_subfield(const FieldFixture& fix, const std::string& id) {
  return id.empty() ? fix.rationals() : fix.subfield(id);
}

json subfield_json(const SubfieldDescriptor& f) {
  return {{"index", f.index}, {"label", f.label}, {"degree", f.degree}, {"fibers", f.fibers}};
}

json quotient_json(const FieldFixture& fix, const AMatrix& a, const QuotientSolution& q, bool with_eta) {
  json rows = json::array();
  for (int v = 0; v < a.rows(); ++v) {
    json entries = json::array();
    for (const auto& e : a.entries[static_cast<size_t>(v)]) entries.push_back(ball_json(e));
    rows.push_back({{"places", a.base_places[static_cast<size_t>(v)]},
                    {"d_v", to_string(a.local_degree[static_cast<size_t>(v)])},
                    {"entries", entries}});
  }
  json x = json::array();
  for (const auto& xv : q.x) x.push_back(ball_json(xv));
  json out = {{"subfield", subfield_json(fix.subfields()[static_cast<size_t>(a.subfield)])},
              {"ext_degree", a.ext_count},
              {"a_matrix", rows},
              {"qnorm", ball_json(q.qnorm)},
              {"k", q.k},
              {"x", x},
              {"residual_raw", ball_json(q.residual_raw)},
              {"residual", ball_json(q.residual)}};
  if (with_eta) {
    json ex = json::array();
    for (const auto& xv : q.eta_x) ex.push_back(ball_json(xv));
    out["eta"] = {{"k", q.eta_k},
                  {"x", ex},
                  {"norm_raw", ball_json(q.eta_norm_raw)},
                  {"norm_formula", ball_json(q.eta_norm_formula)},
                  {"height", ball_json(q.eta_height)},
                  {"vector", vector_json(fix, q.eta)},
                  {"inequality", {{"lhs", ball_json(q.ineq_lhs)},
                                  {"rhs", ball_json(q.ineq_rhs)},
                                  {"holds", q.ineq_lhs.mid() <= q.ineq_rhs.mid() + Real(fix.tolerance())}}}};
  }
  return out;
}

std::vector<PlaceId> sunit_set(const FieldFixture& fix, const std::string& primes) {
  std::vector<PlaceId> s = fix.archimedean_places();
  std::stringstream ss(primes);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    unsigned long p = 0;
    try {
      p = std::stoul(tok);
    } catch (const std::exception&) {
      throw ValidationError("--sprimes: '" + tok + "' is not a prime");
    }
    const auto over = fix.places_over(p);
    if (over.empty()) throw ValidationError("--sprimes: fixture has no places over " + tok);
    s.insert(s.end(), over.begin(), over.end());
  }
  std::sort(s.begin(), s.end());
  return s;
}

json execute(const std::string& cmd, const Options& o, CommandResult& result) {
  PrecisionScope scope(o.precision);
  LoadOptions lo;
  lo.precision_bits = o.precision;
  lo.tolerance = o.tol;
  const auto path = resolve_fixture(o.fixture);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  const FieldFixture fix = parse_fixture(text.str(), lo);
  std::string digest_src = text.str();
  for (const auto& a : result.args) digest_src += '\0' + a;
  result.inputs_digest = fnv1a(digest_src);

  auto need_element = [&]() {
    if (o.element.empty()) throw CLI::RequiredError("--element");
    return fix.element(o.element);
  };

  if (cmd == "validate") {
    json subs = json::array();
    for (const auto& f : fix.subfields()) subs.push_back(subfield_json(f));
    json names = json::array();
    for (const auto& [n, e] : fix.elements()) names.push_back(n);
    return {{"label", fix.label()},          {"degree", fix.degree()},
            {"places", fix.place_count()},   {"subfields", subs},
            {"s_unit_rank", fix.s_unit_rank()}, {"expected_rank", fix.place_count() - 1},
            {"class_number", fix.class_number()}, {"elements", names}};
  }
  if (cmd == "height") {
    const LogVector a = need_element();
    const HeightValue h = height(fix, a, parse_p(o.p));
    return {{"p", o.p}, {"normalized", h.normalized}, {"height", ball_json(h.value)}};
  }
  if (cmd == "delta") {
    const LogVector a = need_element();
    return {{"delta", delta(fix, a)}};
  }
  if (cmd == "qnorm" || cmd == "eta") {
    const LogVector a = need_element();
    const AMatrix m = a_matrix(fix, a, pick_subfield(fix, o.subfield), build_S(fix, a));
    const QuotientSolution q = cmd == "eta" ? eta_min_height(m) : minimizer_x(m);
    return quotient_json(fix, m, q, cmd == "eta");
  }
  if (cmd == "project-field") {
    const LogVector a = need_element();
    const auto& f = pick_subfield(fix, o.subfield);
    const LogVector pa = proj_field(fix, f, a);
    return {{"subfield", subfield_json(f)},
            {"vector", vector_json(fix, pa)},
            {"basis_coords", coords_json(fix.recognize(pa))},
            {"h1_before", ball_json(h1(fix, a))},
            {"h1_after", ball_json(h1(fix, pa))}};
  }
  if (cmd == "project-sunits") {
    const LogVector a = need_element();
    const auto s = sunit_set(fix, o.sprimes);
    const AlphaVSystem sys = build_alpha_v_system(fix);
    const LogVector pa = proj_sunits(fix, s, sys, a);
    json nv = json::object();
    for (PlaceId v : fix.finite_places()) {
      if (std::find(s.begin(), s.end(), v) == s.end()) nv[std::to_string(v)] = to_string(n_v(sys, a, v));
    }
    return {{"S", s},
            {"n_v", nv},
            {"vector", vector_json(fix, pa)},
            {"basis_coords", coords_json(fix.recognize(pa))},
            {"h1_before", ball_json(h1(fix, a))},
            {"h1_after", ball_json(h1(fix, pa))}};
  }
  if (cmd == "extremal-m1") {
    const LogVector a = need_element();
    const DecompositionResult r = extremal_m1(fix, a);
    json parts = json::array();
    for (const auto& p : r.parts) {
      json certs = json::array();
      for (const auto& c : p.certificates) {
        certs.push_back({{"subfield", fix.subfields()[static_cast<size_t>(c.subfield)].label},
                         {"quotient", ball_json(c.quotient)},
                         {"holds", c.holds}});
      }
      parts.push_back({{"subfield", p.label},
                       {"degree", p.degree},
                       {"height", ball_json(p.height)},
                       {"weighted", ball_json(p.weighted)},
                       {"basis_coords", coords_json(p.rational_coords)},
                       {"vector", vector_json(fix, p.alpha)},
                       {"certificates", certs}});
    }
    return {{"total", ball_json(r.total)},
            {"parts", parts},
            {"S", r.s_used},
            {"h1", ball_json(r.h1)},
            {"delta", r.delta},
            {"upper", ball_json(r.upper)},
            {"certificates_hold", r.certificates_hold},
            {"attainment", r.attainment}};
  }
  if (cmd == "oracle-check") {
    const LogVector a = need_element();
    const auto s = build_S(fix, a);
    const Real tol(o.tol);
    auto to_double_problem = [](const L1Problem<Real>& p) {
      return convert_problem<double>(p, [](const Real& x) { return to_double(x); });
    };
    bool agree = true;
    json checks = json::array();
    std::vector<const SubfieldDescriptor*> fields;
    if (o.subfield.empty()) {
      for (const auto& f : fix.subfields()) fields.push_back(&f);
    } else {
      fields.push_back(&fix.subfield(o.subfield));
    }
    for (const auto* f : fields) {
      const AMatrix m = a_matrix(fix, a, *f, s);
      const Ball q = quotient_norm(m);
      const QuotientLp lp = to_l1_problem(m);
      const Ball simplex = solve_certified(lp.problem, lp.rhs).value / Rational(fix.degree());
      const double sub = solve_subgradient(to_double_problem(lp.problem)).objective / fix.degree();
      const bool ok = boost::multiprecision::abs(q.mid() - simplex.mid()) <= tol &&
                      boost::multiprecision::abs(q.mid() - Real(sub)) <= tol;
      agree = agree && ok;
      std::ostringstream sub_s;
      sub_s << std::setprecision(17) << sub;
      checks.push_back({{"kind", "qnorm"},
                        {"subfield", f->label},
                        {"formula", ball_json(q)},
                        {"simplex", ball_json(simplex)},
                        {"subgradient", sub_s.str()},
                        {"agree", ok}});
    }
    const DecompositionResult r = extremal_m1(fix, a);
    const ExtremalLp xlp = extremal_problem(fix, a, r.s_used);
    const double sub = solve_subgradient(to_double_problem(xlp.problem)).objective;
    const bool ok = boost::multiprecision::abs(r.total.mid() - Real(sub)) <= tol;
    agree = agree && ok;
    std::ostringstream sub_s;
    sub_s << std::setprecision(17) << sub;
    checks.push_back({{"kind", "extremal"}, {"simplex", ball_json(r.total)}, {"subgradient", sub_s.str()}, {"agree", ok}});
    if (!agree) {
      result.status = "mismatch";
      result.exit_code = kFailure;
      result.message = "oracles disagree beyond tolerance";
    }
    return {{"tolerance", o.tol}, {"checks", checks}, {"agree", agree}};
  }
  throw CLI::ValidationError("subcommand", "unknown subcommand '" + cmd + "'");
}

}  // namespace

json CommandResult::to_json() const {
  return {{"command", command}, {"args", args},     {"inputs_digest", inputs_digest},
          {"outputs", outputs}, {"status", status}, {"message", message}};
}

CommandResult run(const std::vector<std::string>& args) {
  CommandResult result;
  result.args = args;
  Options o;
  CLI::App app{"Heights, quotient norms and the extremal Mahler norm on S-unit fixtures", "mahler"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "load and validate a fixture"},
      {"height", "L^p Weil height"},
      {"delta", "size of the Galois orbit"},
      {"qnorm", "quotient norm modulo a subfield's S-unit space"},
      {"eta", "quotient norm with the minimal-height minimizer"},
      {"project-field", "field projection P_F"},
      {"project-sunits", "S-unit projection P_S"},
      {"extremal-m1", "extremal norm by subfield decomposition"},
      {"oracle-check", "compare closed forms, simplex and subgradient"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--fixture", o.fixture, "fixture path or name")->required();
    sub->add_option("--element", o.element, "named element or comma-separated basis coordinates");
    sub->add_option("--p", o.p, "height exponent: 1, 2 or inf");
    sub->add_option("--subfield", o.subfield, "subfield index or label (default Q)");
    sub->add_option("--sprimes", o.sprimes, "comma-separated primes whose places join S (project-sunits)");
    sub->add_option("--precision", o.precision, "working precision in bits")->check(CLI::Range(64u, 4096u));
    sub->add_option("--tol", o.tol, "comparison tolerance")->check(CLI::PositiveNumber);
    sub->add_flag("--json", o.json, "emit a single JSON document");
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    for (auto* sub : app.get_subcommands()) result.command = sub->get_name();
    if (!o.p.empty()) parse_p(o.p);
    result.outputs = execute(result.command, o, result);
  } catch (const CLI::CallForHelp&) {
    result.status = "help";
    result.message = app.help();
  } catch (const CLI::Error& e) {
    result.status = "usage";
    result.message = e.what();
    result.exit_code = kUsage;
  } catch (const PrecisionError& e) {
    result.status = "precision";
    result.message = e.what();
    result.exit_code = kPrecision;
  } catch (const InternalError& e) {
    result.status = "internal";
    result.message = e.what();
    result.exit_code = kFailure;
  } catch (const Error& e) {
    result.status = "validation";
    result.message = e.what();
    result.exit_code = kValidation;
  }
  if (result.exit_code != kOk) result.outputs = json::object();
  result.json = o.json;
  return result;
}

std::string render_json(const CommandResult& r) { return r.to_json().dump(2) + "\n"; }

namespace {

void flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object() && j.contains("mid") && j.contains("rad") && j.size() == 2) {
    os << prefix << " = " << j["mid"].get<std::string>() << " +/- " << j["rad"].get<std::string>() << "\n";
    return;
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
    return;
  }
  if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
    return;
  }
  os << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

}  // namespace

std::string render_text(const CommandResult& r) {
  std::ostringstream os;
  if (r.status == "help") return r.message;
  os << r.command << ": " << r.status << "\n";
  if (!r.message.empty()) os << r.message << "\n";
  flatten(r.outputs, "", os);
  return os.str();
}

}  // namespace mahler::cli
