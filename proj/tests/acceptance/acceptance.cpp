// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "mahler/cli.hpp"
#include "mahler/extremal.hpp"
#include "mahler/projections.hpp"
#include "mahler/quotient.hpp"
#include "quotient_support.hpp"
#include "support.hpp"

using namespace mahler;
using testing_support::fixture;

namespace {

constexpr double kTol = 1e-9;        // criteria tolerance
constexpr double kExact = 1e-25;     // "exact" agreement at the default 200 bits
constexpr double kFastLimit = 1.0;   // seconds, criteria 1 and 2
constexpr double kOracleLimit = 60;  // seconds, criterion 3
constexpr int kSamples = 100;
constexpr int kPerturbations = 1000;

const char* kLog2 = "0.693147180559945309417232121458";
const char* kLog6 = "1.79175946922805500081247735838";
const char* kTwoLogTau = "0.962423650119206894995517826849";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double to_d(const Real& x) { return x.convert_to<double>(); }

struct Report {
  bool all = true;
  void line(int n, bool ok, const std::string& what, const std::string& detail) {
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what << " (" << detail << ")" << std::endl;
  }
};

// Runs extremal-m1 through the command line front end; returns the total and the
// wall time of the whole invocation (fixture load included).
std::pair<Real, double> cli_total(const std::string& fix, const std::string& element, std::string* part = nullptr) {
  const auto t0 = Clock::now();
  const auto r = cli::run({"extremal-m1", "--fixture", fix, "--element", element, "--json"});
  const double dt = seconds_since(t0);
  if (r.exit_code != 0) return {Real(-1), dt};
  if (part && r.outputs["parts"].size() == 1) *part = r.outputs["parts"][0]["subfield"].get<std::string>();
  return {Real(r.outputs["total"]["mid"].get<std::string>()), dt};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

void criterion1(Report& rep) {
  std::string part;
  const auto [total, dt] = cli_total("qsqrt5", "golden", &part);
  const double err = to_d(boost::multiprecision::abs(total - Real(kTwoLogTau)));
  const bool ok = err <= kTol && dt < kFastLimit && part == "Q(sqrt5)";
  rep.line(1, ok, "Pisot closed form on the golden ratio",
           "error " + fmt(err) + ", part " + part + ", " + fmt(dt) + " s");
}

void criterion2(Report& rep) {
  const auto [t2, dt2] = cli_total("qsqrt2", "sqrt2");
  const auto [t6, dt6] = cli_total("qbiquad", "sqrt6");
  const double e2 = to_d(boost::multiprecision::abs(t2 - Real(kLog2)));
  const double e6 = to_d(boost::multiprecision::abs(t6 - Real(kLog6)));
  const bool ok = e2 <= kTol && e6 <= kTol && dt2 < kFastLimit && dt6 < kFastLimit;
  rep.line(2, ok, "surd closed forms sqrt2 and sqrt6",
           "errors " + fmt(e2) + ", " + fmt(e6) + "; " + fmt(dt2) + " s, " + fmt(dt6) + " s");
}

struct QuotientStats {
  int instances = 0;
  int oracle_fail = 0;
  int formula_fail = 0;
  int perturbation_fail = 0;
  int perturbations = 0;
  int ineq_fail = 0;
  double worst_oracle = 0;
  double worst_ineq = 0;
  double seconds = 0;
};

// Independent evaluation of max{sum 2 a+_{v,k}, sum 2 a-_{v,k+1}} over the valid pivots.
Real formula_from_matrix(const AMatrix& a) {
  const int n = a.ext_count;
  std::vector<Real> s(static_cast<size_t>(n), Real(0));
  for (const auto& row : a.entries) {
    for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] += row[static_cast<size_t>(i)].mid();
  }
  const Real noise("1e-40");
  Real best(-1);
  for (int k = 0; k <= n; ++k) {
    const bool left = k == 0 || s[static_cast<size_t>(k - 1)] <= noise;
    const bool right = k == n || s[static_cast<size_t>(k)] >= -noise;
    if (!left || !right) continue;
    Real lo(0);
    Real hi(0);
    for (const auto& row : a.entries) {
      if (k > 0) lo += 2 * boost::multiprecision::max(row[static_cast<size_t>(k - 1)].mid(), Real(0));
      if (k < n) hi += 2 * boost::multiprecision::max(-row[static_cast<size_t>(k)].mid(), Real(0));
    }
    const Real f = boost::multiprecision::max(lo, hi);
    if (best < 0 || f < best) best = f;
  }
  return best;
}

QuotientStats quotient_suite() {
  QuotientStats st;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20261015);
  for (const char* name : {"qsqrt2", "qsqrt5", "qbiquad"}) {
    const auto& fix = fixture(name);
    for (int trial = 0; trial < kSamples; ++trial) {
      const LogVector alpha = testing_support::random_element(fix, rng);
      const auto s = build_S(fix, alpha);
      for (const auto& k : fix.subfields()) {
        ++st.instances;
        const AMatrix a = a_matrix(fix, alpha, k, s);
        const QuotientSolution q = minimizer_x(a);
        const QuotientSolution eta = eta_min_height(a);
        const Real qn = q.qnorm.mid();

        const QuotientLp lp = to_l1_problem(a);
        const Real simplex = solve_certified(lp.problem, lp.rhs).value.mid() / a.top_degree;
        const auto dp = convert_problem<double>(lp.problem, [](const Real& x) { return to_d(x); });
        const double sub = solve_subgradient(dp).objective / a.top_degree;
        const double gap = std::max(to_d(boost::multiprecision::abs(simplex - qn)), std::abs(sub - to_d(qn)));
        st.worst_oracle = std::max(st.worst_oracle, gap);
        if (gap > kTol) ++st.oracle_fail;

        const Real formula = formula_from_matrix(a);
        if (boost::multiprecision::abs(eta.eta_norm_raw.mid() - formula) > kExact) ++st.formula_fail;

        // at least kPerturbations draws per fixture
        const int instances = kSamples * static_cast<int>(fix.subfields().size());
        const int count = (kPerturbations + instances - 1) / instances;
        for (int t = 0; t < count; ++t) {
          ++st.perturbations;
          const auto x = testing_support::random_optimal_point(a, q, eta, rng);
          const bool optimal = testing_support::residual(a, x) <= q.residual_raw.mid() + kTol;
          if (optimal && testing_support::l1_norm(x) < eta.eta_norm_raw.mid() - kTol) ++st.perturbation_fail;
        }

        const double slack = to_d(eta.ineq_lhs.mid() - eta.ineq_rhs.mid());
        st.worst_ineq = std::max(st.worst_ineq, slack);
        if (slack > kTol) ++st.ineq_fail;
      }
    }
  }
  st.seconds = seconds_since(t0);
  return st;
}

bool all_vectors_near(const LogVector& a, const LogVector& b, double tol) { return testing_support::vectors_near(a, b, tol); }

const SubfieldDescriptor* lattice_by_subgroup(const FieldFixture& fix, std::vector<int> h) {
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  for (const auto& f : fix.subfields()) {
    if (f.subgroup == h) return &f;
  }
  return nullptr;
}

void criterion6(Report& rep) {
  const auto& fix = fixture("qbiquad");
  const auto& g = fix.galois();
  std::mt19937_64 rng(6);
  int fails = 0;
  double worst_orth = 0;
  for (int trial = 0; trial < kSamples; ++trial) {
    const LogVector a = testing_support::random_element(fix, rng);
    const int da = delta(fix, a);
    for (const auto& f : fix.subfields()) {
      const LogVector pa = proj_field(fix, f, a);
      if (!all_vectors_near(proj_field(fix, f, pa), pa, kTol)) ++fails;
      for (double p : {1.0, 2.0, kInfinity}) {
        if (to_d(height(fix, pa, p).value.mid() - height(fix, a, p).value.mid()) > kTol) ++fails;
      }
      if (delta(fix, pa) > da) ++fails;
      Real inner(0);
      const LogVector rest = a - pa;
      for (const auto& pl : fix.places()) inner += pa[pl.id].mid() * rest[pl.id].mid() * pl.local_degree / fix.degree();
      worst_orth = std::max(worst_orth, std::abs(to_d(inner)));
      if (std::abs(to_d(inner)) >= kTol) ++fails;
      for (const auto& s : g.elements) {
        std::vector<int> conj;
        for (int i : f.subgroup) conj.push_back(g.index_of(s * g.elements[static_cast<size_t>(i)] * s.inverse()));
        const auto* sf = lattice_by_subgroup(fix, conj);
        if (!sf || !all_vectors_near(act(s, pa), proj_field(fix, *sf, act(s, a)), kTol)) ++fails;
      }
      for (const auto& e : fix.subfields()) {
        std::vector<Permutation> gens;
        for (int i : e.subgroup) gens.push_back(g.elements[static_cast<size_t>(i)]);
        for (int i : f.subgroup) gens.push_back(g.elements[static_cast<size_t>(i)]);
        std::vector<int> joined;
        for (const auto& x : generate_group(gens, fix.place_count())) joined.push_back(g.index_of(x));
        const auto* meet = lattice_by_subgroup(fix, joined);
        if (!meet || !all_vectors_near(proj_field(fix, e, pa), proj_field(fix, *meet, a), kTol)) ++fails;
      }
    }
  }
  rep.line(6, fails == 0, "field projection suite on the biquadratic field",
           std::to_string(kSamples) + " elements x 5 subfields, " + std::to_string(fails) +
               " failures, worst orthogonality residual " + fmt(worst_orth));
}

void criterion7(Report& rep) {
  const auto& fix = fixture("qsqrt2-ext");
  const AlphaVSystem sys = build_alpha_v_system(fix);
  std::vector<PlaceId> s = fix.archimedean_places();
  for (PlaceId w : fix.places_over(2)) s.push_back(w);
  const LogVector p = proj_sunits(fix, s, sys, fix.element("7(1+sqrt2)"));
  const LogVector u = fix.element("1+sqrt2");
  bool example = p.has_exact_valuations() && p.valuations() == u.valuations();
  for (PlaceId w : fix.archimedean_places()) example = example && to_d(abs(p[w] - u[w]).mid()) <= kTol;
  std::mt19937_64 rng(7);
  int fails = 0;
  for (int trial = 0; trial < kSamples; ++trial) {
    const LogVector a = testing_support::random_element(fix, rng);
    const LogVector pa = proj_sunits(fix, s, sys, a);
    if (to_d(h1(fix, pa).mid() - h1(fix, a).mid()) > kTol) ++fails;
    if (delta(fix, pa) > delta(fix, a)) ++fails;
  }
  rep.line(7, example && fails == 0, "S-unit projection on Q(sqrt2) with places over 7",
           std::string("7(1+sqrt2) -> 1+sqrt2 ") + (example ? "exact" : "wrong") + ", " + std::to_string(fails) +
               " monotonicity failures over " + std::to_string(kSamples) + " elements");
}

void criterion8(Report& rep) {
  const auto& fix = fixture("qbiquad");
  std::mt19937_64 rng(8);
  int fails = 0;
  double worst = 0;
  auto total = [&](const LogVector& v, double* hv = nullptr, int* dv = nullptr) {
    const DecompositionResult r = extremal_m1(fix, v);
    if (hv) *hv = to_d(r.h1.mid());
    if (dv) *dv = r.delta;
    return to_d(r.total.mid());
  };
  auto sandwich = [&](const LogVector& v) {
    double h = 0;
    int d = 1;
    const double t = total(v, &h, &d);
    if (t < h - kTol || t > d * h + kTol) ++fails;
    return t;
  };
  for (int trial = 0; trial < kSamples; ++trial) {
    const LogVector a = testing_support::random_element(fix, rng);
    const LogVector b = testing_support::random_element(fix, rng);
    const double ta = sandwich(a);
    const double tb = sandwich(b);
    const double tab = sandwich(a + b);
    worst = std::max(worst, tab - ta - tb);
    if (tab > ta + tb + kTol) ++fails;
    const Rational r = testing_support::random_rational(rng);
    const double scaled = total(a * r);
    const double err = std::abs(scaled - std::abs(r.convert_to<double>()) * ta);
    if (err > kTol * std::max(1.0, std::abs(scaled))) ++fails;
  }
  rep.line(8, fails == 0, "norm axioms and sandwich of the extremal norm",
           std::to_string(kSamples) + " pairs, " + std::to_string(fails) + " failures, worst triangle slack " + fmt(worst));
}

void criterion9(Report& rep) {
  bool ok = true;
  std::string detail;
  for (const auto& name : testing_support::fixture_names()) {
    const auto& fix = fixture(name);
    const int rank = fix.s_unit_rank();
    ok = ok && rank == fix.place_count() - 1 && static_cast<int>(fix.s_unit_basis().size()) == rank;
    detail += (detail.empty() ? "" : ", ") + name + " " + std::to_string(rank) + "/" + std::to_string(fix.place_count() - 1);
  }
  rep.line(9, ok, "S-unit rank equals #S - 1", detail);
}

}  // namespace

int main() {
  Report rep;
  criterion1(rep);
  criterion2(rep);
  const QuotientStats st = quotient_suite();
  rep.line(3, st.oracle_fail == 0 && st.seconds < kOracleLimit, "quotient norm against simplex and subgradient",
           std::to_string(st.instances) + " instances, worst gap " + fmt(st.worst_oracle) + ", " + fmt(st.seconds) + " s");
  rep.line(4, st.formula_fail == 0 && st.perturbation_fail == 0, "least-height minimizer",
           std::to_string(st.formula_fail) + " formula mismatches, " + std::to_string(st.perturbation_fail) + " of " +
               std::to_string(st.perturbations) + " optimal perturbations beat it");
  rep.line(5, st.ineq_fail == 0, "height inequality for the minimizer",
           std::to_string(st.instances) + " instances, worst lhs - rhs " + fmt(st.worst_ineq));
  criterion6(rep);
  criterion7(rep);
  criterion8(rep);
  criterion9(rep);
  return rep.all ? 0 : 1;
}
