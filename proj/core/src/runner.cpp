#include "etlab/runner.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <set>
#include <sstream>

#include "etlab/algebra.hpp"
#include "etlab/parallel.hpp"

namespace etlab {
namespace {

using nlohmann::ordered_json;

struct IdentityDef {
  const char* suite;
  const char* name;
  const char* anchor;
  double tolerance;
};

// Report order. Tolerances follow the derivative depth of each identity.
const std::vector<IdentityDef>& identity_defs() {
  static const std::vector<IdentityDef> defs = {
      {"symmetries", "riemann_antisymmetry", "R_ijkl = -R_jikl = -R_ijlk", 1e-8},
      {"symmetries", "riemann_pair_symmetry", "R_ijkl = R_klij", 1e-8},
      {"symmetries", "first_bianchi", "R_ijkl + R_jkil + R_kijl = 0", 1e-8},
      {"symmetries", "metric_compatibility", "grad g = 0", 1e-8},
      {"symmetries", "weyl_symmetries", "W has the symmetries of Rm", 1e-8},
      {"symmetries", "weyl_trace_free", "g^ik W_ijkl = 0 on every slot pair", 1e-8},
      {"symmetries", "cotton_antisymmetry", "C_ijk = -C_jik", 1e-8},
      {"symmetries", "cotton_cyclic", "C_ijk + C_jki + C_kij = 0", 1e-8},
      {"symmetries", "cotton_trace_free", "g^ij C_ijk = g^ik C_ijk = 0", 1e-8},
      {"symmetries", "bach_symmetry", "B_ij = B_ji", 1e-8},
      {"symmetries", "bach_trace_free", "g^ij B_ij = 0", 1e-8},
      {"curvature_identities", "ricci_identity",
       "grad_i grad_j grad_k u - grad_j grad_i grad_k u = R_ijkl grad^l u", 1e-9},
      {"curvature_identities", "contracted_bianchi", "grad^j R_ji = grad_i R / 2", 1e-9},
      {"curvature_identities", "cotton_weyl", "C_ijk = -((n-2)/(n-3)) grad^l W_ijkl", 1e-8},
      {"curvature_identities", "bach_forms",
       "grad^k grad^l W_ikjl/(n-3) + R^kl W_ikjl/(n-2) = -grad^k C_ikj/(n-2) + R^kl W_ikjl/(n-2)",
       1e-8},
      {"curvature_identities", "div_bach", "grad^j B_ij = ((n-4)/(n-2)^2) C_ijk R^jk", 1e-7},
      {"einstein_type", "principal", "f Ric = Hess f + h g", 1e-8},
      {"einstein_type", "trace", "f R = Lap f + n h", 1e-8},
      {"einstein_type", "trace_consistency", "tr_g(f Ric - Hess f - h g) = f R - Lap f - n h",
       1e-12},
      {"einstein_type", "grad_h", "grad h = (R grad f + f grad R / 2) / (n-1)", 1e-8},
      {"einstein_type", "special_case_tensor", "tensor equation of the case tag", 1e-8},
      {"einstein_type", "special_case_scalar", "scalar equation of the case tag", 1e-8},
      {"einstein_type", "case_coefficient", "h as fixed by the case tag", 1e-8},
      {"einstein_type", "perfect_fluid_back_substitution",
       "(mu, rho) solve h = (mu-rho) f/(n-1) and the trace equation", 1e-10},
      {"lemmas", "fC", "f C = W(., ., ., grad f) + T", 1e-8},
      {"lemmas", "bach",
       "(n-2) B_ij = -grad^k(T_ikj/f) + ((n-3)/(n-2)) C_jki grad^k f/f + W_ikjl grad^k f "
       "grad^l f/f^2",
       1e-7},
      {"lemmas", "second_order",
       "C_jki R^ik = (n-2) grad^i grad^k(T_ikj/f) - (n-2) W_ikjl (R^ik grad^l f + R^il grad^k "
       "f)/f",
       1e-7},
      {"lemmas", "third_order",
       "|C|^2/2 + R^ik grad^j C_jki = (n-2) grad^j grad^i grad^k(T_ikj/f) - (n-2) grad^j[W_ikjl "
       "(R^ik grad^l f + R^il grad^k f)/f]",
       1e-6},
      {"divergences", "cotton_zero", "C = 0", 1e-8},
      {"divergences", "cotton_divergence_symmetric", "grad^i C_ijk = grad^i C_ikj", 1e-8},
      {"divergences", "cotton_divergence_free", "grad^i C_jki = 0", 1e-8},
      {"divergences", "div_weyl", "grad^l W_ijkl = 0", 1e-8},
      {"divergences", "div4_weyl", "grad^k grad^i grad^j grad^l W_jkil = 0", 1e-6},
      {"divergences", "radial_weyl", "W(., ., ., grad f) = 0", 1e-9},
      {"algebra", "hessian_cotton_cancellation", "2 H^kj C_jki = 0 for symmetric H", 1e-12},
      {"algebra", "cotton_norm_contraction",
       "S^ji v^k C_kji = -((n-2) f/(2(n-1))) |C|^2 when C = T/f", 1e-9},
      {"classification", "ricci_eigenvector", "Ric(grad f) = kappa grad f", 1e-8},
      {"classification", "ricci_eigen_combinations",
       "grad_j f [R_jj + (n-1) R_ii - R] = 0, i != j", 1e-8},
      {"classification", "level_set_spread", "|grad f| constant on a level set of f", 1e-9},
      {"classification", "level_set_identity", "f R_a1 = grad_a |grad f|^2 / 2 + h grad_a f",
       1e-8},
      {"classification", "fiber_einstein", "Ric_fiber = lambda g_fiber", 1e-9},
      {"classification", "fiber_einstein_weyl",
       "W_rarb / g_rr = -(Ric_fiber_ab - R_fiber g_fiber_ab/(n-1))/(n-2)", 1e-7},
  };
  return defs;
}

std::string key_of(const IdentityDef& d) { return std::string(d.suite) + "." + d.name; }

// Per-point outcome: relative residual, or empty when skipped.
using PointResults = std::map<std::string, std::optional<double>>;

struct PointNotes {
  double max_cotton = 0.0;
  double max_radial_weyl = 0.0;
  int energy_violations = 0;
  bool weyl_dimension_warning = false;
};

RealTensor ricci_up_values(const CurvatureBundle& b) {
  const MetricValue& mv = b.metric_value();
  return raise(raise(values(b.ricci()), 0, mv), 1, mv);
}

double max_trace(const RealTensor& t, const MetricValue& mv) {
  double m = 0.0;
  for (int a = 0; a < t.rank(); ++a)
    for (int c = a + 1; c < t.rank(); ++c) m = std::max(m, max_abs(contract(t, a, c, &mv)));
  return m;
}

Jet random_cubic(int n, int order, Rng& rng) {
  Jet u(n, order);
  auto coeffs = u.coefficients();
  const std::size_t count = u.basis().prefix_size(std::min(order, 3));
  for (std::size_t i = 0; i < count; ++i) coeffs[i] = uniform(rng, -1.0, 1.0);
  return u;
}

std::string format_point(const std::vector<double>& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

class PointEvaluator {
 public:
  PointEvaluator(const CatalogStructure& cs, const RunConfig& config,
                 const std::set<std::string>& suites, std::vector<double> point,
                 std::uint64_t stream)
      : cs_(cs), config_(config), suites_(suites), point_(std::move(point)), stream_(stream) {}

  PointResults evaluate(PointNotes& notes) {
    try {
      sp_.emplace(cs_.structure, point_, config_.jet_order, config_.structure_options);
      const CurvatureBundle& b = sp_->bundle();
      n_ = b.dim();
      if (suites_.count("symmetries")) symmetries();
      if (suites_.count("curvature_identities")) curvature_identities();
      if (suites_.count("einstein_type")) einstein_type(notes);
      if (suites_.count("lemmas")) lemmas();
      if (suites_.count("divergences")) divergences(notes);
      if (suites_.count("classification")) classification();
      notes.weyl_dimension_warning = n_ == 3;
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " [sample point " + format_point(point_) + "]");
    }
    return std::move(results_);
  }

 private:
  void put(const std::string& key, double rel) { results_[key] = rel; }
  void skip(const std::string& key) { results_[key] = std::nullopt; }

  template <class Fn>
  void guarded(std::initializer_list<const char*> keys, Fn&& fn) {
    try {
      fn();
    } catch (const NearZeroPotential&) {
      for (const char* k : keys) skip(k);
    } catch (const CriticalPoint&) {
      for (const char* k : keys) skip(k);
    }
  }

  const CurvatureBundle& bundle() const { return sp_->bundle(); }
  const MetricValue& mv() const { return bundle().metric_value(); }

  const RealTensor& cotton_values() {
    if (!cotton_) cotton_ = values(cotton(bundle()));
    return *cotton_;
  }
  const BachForms& bach_forms() {
    if (!bach_) bach_ = bach(bundle());
    return *bach_;
  }
  const CurvatureSymmetryReport& symmetry_report() {
    if (!sym_) sym_ = curvature_symmetries(bundle());
    return *sym_;
  }

  void symmetries() {
    const auto& sym = symmetry_report();
    put("symmetries.riemann_antisymmetry",
        relative_residual(sym.riemann_antisymmetry, sym.riemann_scale));
    put("symmetries.riemann_pair_symmetry",
        relative_residual(sym.riemann_pair_symmetry, sym.riemann_scale));
    put("symmetries.first_bianchi", relative_residual(sym.first_bianchi, sym.riemann_scale));
    put("symmetries.metric_compatibility",
        relative_residual(sym.metric_compatibility, max_abs(mv().g)));

    const RealTensor w = values(weyl(bundle()));
    double wsym = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int l = 0; l < n_; ++l) {
            const double v = w(i, j, k, l);
            wsym = std::max({wsym, std::abs(v + w(j, i, k, l)), std::abs(v + w(i, j, l, k)),
                             std::abs(v - w(k, l, i, j)),
                             std::abs(v + w(j, k, i, l) + w(k, i, j, l))});
          }
    put("symmetries.weyl_symmetries", relative_residual(wsym, max_abs(w)));
    put("symmetries.weyl_trace_free", relative_residual(max_trace(w, mv()), max_abs(w)));

    const auto cs = check_cotton_symmetries(cotton_values(), mv());
    put("symmetries.cotton_antisymmetry", relative_residual(cs.antisymmetry, cs.scale));
    put("symmetries.cotton_cyclic", relative_residual(cs.cyclic, cs.scale));
    put("symmetries.cotton_trace_free", relative_residual(cs.trace, cs.scale));

    if (n_ >= 4) {
      const RealTensor bw = values(bach_forms().weyl_form);
      double asym = 0.0;
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) asym = std::max(asym, std::abs(bw(i, j) - bw(j, i)));
      put("symmetries.bach_symmetry", relative_residual(asym, max_abs(bw)));
      put("symmetries.bach_trace_free",
          relative_residual(std::abs(contract(bw, 0, 1, &mv())[0]), max_abs(bw)));
    }
  }

  void curvature_identities() {
    Rng rng = make_rng(config_.seed, 2'000'000 + stream_);
    const Jet u = random_cubic(n_, bundle().order(), rng);
    put("curvature_identities.ricci_identity", ricci_identity_residual(bundle(), u).relative());
    const auto& sym = symmetry_report();
    put("curvature_identities.contracted_bianchi",
        relative_residual(sym.contracted_bianchi, sym.contracted_bianchi_scale));
    if (n_ < 4) return;

    const RealTensor& c = cotton_values();
    const RealTensor dw = ((n_ - 2.0) / (n_ - 3.0)) * values(div_weyl(bundle(), 1));
    put("curvature_identities.cotton_weyl",
        relative_residual(max_abs(c + dw), std::max(max_abs(c), max_abs(dw))));

    const RealTensor bw = values(bach_forms().weyl_form);
    const RealTensor bc = values(bach_forms().cotton_form);
    put("curvature_identities.bach_forms",
        relative_residual(max_abs(bw - bc), std::max(max_abs(bw), max_abs(bc))));

    const RealTensor div_b = values(bundle().divergence(bach_forms().weyl_form, 1));
    const RealTensor ric_up = ricci_up_values(bundle());
    const double coef = (n_ - 4.0) / ((n_ - 2.0) * (n_ - 2.0));
    double res = 0.0, scale = 0.0;
    for (int i = 0; i < n_; ++i) {
      double rhs = 0.0;
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) rhs += c(i, j, k) * ric_up(j, k);
      rhs *= coef;
      res = std::max(res, std::abs(div_b(i) - rhs));
      scale = std::max({scale, std::abs(div_b(i)), std::abs(rhs)});
    }
    put("curvature_identities.div_bach", relative_residual(res, scale));
  }

  void einstein_type(PointNotes& notes) {
    const StructurePoint& p = *sp_;
    guarded({"einstein_type.principal", "einstein_type.trace", "einstein_type.trace_consistency",
             "einstein_type.grad_h"},
            [&] {
              const auto principal = residual_principal(p);
              const auto trace = residual_trace(p);
              put("einstein_type.principal", principal.relative());
              put("einstein_type.trace", trace.relative());
              const double tr = contract(principal.residual, 0, 1, &mv())[0];
              put("einstein_type.trace_consistency",
                  relative_residual(std::abs(tr - trace.residual),
                                    std::max(principal.scale, trace.scale)));
              put("einstein_type.grad_h", residual_grad_h(p).relative());
            });
    const CaseTag tag = cs_.structure.tag;
    if (tag == CaseTag::kGeneric) return;
    guarded({"einstein_type.special_case_tensor", "einstein_type.special_case_scalar"}, [&] {
      const auto sc = special_case_residual(p);
      put("einstein_type.special_case_tensor", sc.tensor_equation.relative());
      put("einstein_type.special_case_scalar", sc.scalar_equation.relative());
    });
    guarded({"einstein_type.case_coefficient"}, [&] {
      if (auto cc = case_coefficient_residual(p)) put("einstein_type.case_coefficient", cc->relative());
    });
    if (tag == CaseTag::kPerfectFluid) {
      guarded({"einstein_type.perfect_fluid_back_substitution"}, [&] {
        const auto pf = perfect_fluid_coefficients(p);
        put("einstein_type.perfect_fluid_back_substitution",
            relative_residual(pf.back_substitution_residual,
                              std::max(std::abs(pf.density), std::abs(pf.pressure))));
        if (!pf.energy_condition) ++notes.energy_violations;
      });
    }
  }

  void lemmas() {
    const StructurePoint& p = *sp_;
    guarded({"lemmas.fC"}, [&] { put("lemmas.fC", residual_lemma_fC(p).relative()); });
    if (n_ < 4) return;
    guarded({"lemmas.bach"}, [&] { put("lemmas.bach", residual_lemma_bach(p).relative()); });
    guarded({"lemmas.second_order"},
            [&] { put("lemmas.second_order", residual_lemma_second_order(p).relative()); });
    guarded({"lemmas.third_order"},
            [&] { put("lemmas.third_order", residual_lemma_third_order(p).relative()); });
  }

  void divergences(PointNotes& notes) {
    const CurvatureBundle& b = bundle();
    const RealTensor& c = cotton_values();
    put("divergences.cotton_zero", relative_residual(max_abs(c), 0.0));
    const JetTensor cj = cotton(b);
    const RealTensor d0 = values(b.divergence(cj, 0));
    const RealTensor d2 = values(b.divergence(cj, 2));
    double asym = 0.0;
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) asym = std::max(asym, std::abs(d0(j, k) - d0(k, j)));
    put("divergences.cotton_divergence_symmetric", relative_residual(asym, max_abs(d0)));
    put("divergences.cotton_divergence_free", relative_residual(max_abs(d2), max_abs(d0)));
    const RealTensor radial = values(radial_weyl(b, sp_->f()));
    put("divergences.radial_weyl", relative_residual(max_abs(radial), 0.0));
    notes.max_cotton = std::max(notes.max_cotton, max_abs(c));
    notes.max_radial_weyl = std::max(notes.max_radial_weyl, max_abs(radial));
    if (n_ < 4) return;
    put("divergences.div_weyl", relative_residual(max_abs(values(div_weyl(b, 1))), 0.0));
    put("divergences.div4_weyl", relative_residual(std::abs(div_weyl(b, 4)[0].value()), 0.0));
  }

  void classification() {
    guarded({"classification.ricci_eigenvector", "classification.ricci_eigen_combinations"},
            [&] {
              const auto ev = check_ricci_eigenvector(*sp_);
              put("classification.ricci_eigenvector", ev.relative());
              if (cs_.level_sets_umbilic_ricci) {
                put("classification.ricci_eigen_combinations", ev.combination_relative());
              } else {
                results_.erase("classification.ricci_eigen_combinations");
              }
            });
    if (!cs_.warped) return;
    const auto& w = *cs_.warped;
    const std::span<const double> fiber_point(point_.data() + 1, point_.size() - 1);
    if (w.fiber_einstein_constant) {
      put("classification.fiber_einstein",
          relative_residual(fiber_einstein_residual(w, fiber_point, 2),
                            std::abs(*w.fiber_einstein_constant)));
    }
    if (n_ >= 4) {
      put("classification.fiber_einstein_weyl", check_fiber_einstein_weyl(w, point_, 2).relative());
    }
  }

  const CatalogStructure& cs_;
  const RunConfig& config_;
  const std::set<std::string>& suites_;
  std::vector<double> point_;
  std::uint64_t stream_;
  int n_ = 0;
  std::optional<StructurePoint> sp_;
  std::optional<RealTensor> cotton_;
  std::optional<BachForms> bach_;
  std::optional<CurvatureSymmetryReport> sym_;
  PointResults results_;
};

struct Accumulator {
  int evaluated = 0;
  int skipped = 0;
  double max = 0.0;
  double sum = 0.0;
  bool nan = false;

  void add(std::optional<double> v) {
    if (!v) {
      ++skipped;
      return;
    }
    ++evaluated;
    if (std::isnan(*v)) nan = true;
    max = std::max(max, *v);
    sum += *v;
  }
};

double tolerance_for(const RunConfig& config, const IdentityDef& d) {
  if (auto it = config.tolerances.find(key_of(d)); it != config.tolerances.end()) return it->second;
  if (auto it = config.tolerances.find(d.suite); it != config.tolerances.end()) return it->second;
  return d.tolerance;
}

std::vector<double> sample_point(const Box& box, std::uint64_t seed, std::uint64_t k) {
  Rng rng = make_rng(seed, k);
  std::vector<double> p(box.dim());
  for (int i = 0; i < box.dim(); ++i)
    p[i] = uniform(rng, box.intervals[i].first, box.intervals[i].second);
  return p;
}

// Line and column (1-based) of a byte offset.
std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

template <class T>
T get_as(const ordered_json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

void check_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

InlineStructureSpec parse_inline(const ordered_json& s) {
  check_keys(s,
             {"dim", "coords", "metric", "metric_diagonal", "conformal_factor", "f", "h", "case",
              "domain", "density", "pressure", "solution"},
             "structure");
  InlineStructureSpec spec;
  if (!s.contains("coords")) throw ConfigError("inline structure needs 'coords'");
  spec.coords = get_as<std::vector<std::string>>(s["coords"], "coords");
  const int n = static_cast<int>(spec.coords.size());
  if (s.contains("dim") && get_as<int>(s["dim"], "dim") != n) {
    throw ConfigError("'dim' does not match the number of coordinates");
  }
  const int forms = int(s.contains("metric")) + int(s.contains("metric_diagonal")) +
                    int(s.contains("conformal_factor"));
  if (forms != 1) {
    throw ConfigError("give exactly one of 'metric', 'metric_diagonal', 'conformal_factor'");
  }
  spec.metric.assign(n, std::vector<std::string>(n, "0"));
  if (s.contains("metric")) {
    spec.metric = get_as<std::vector<std::vector<std::string>>>(s["metric"], "metric");
  } else if (s.contains("metric_diagonal")) {
    const auto d = get_as<std::vector<std::string>>(s["metric_diagonal"], "metric_diagonal");
    if (static_cast<int>(d.size()) != n) throw ConfigError("'metric_diagonal' needs n entries");
    for (int i = 0; i < n; ++i) spec.metric[i][i] = d[i];
  } else {
    const auto c = get_as<std::string>(s["conformal_factor"], "conformal_factor");
    for (int i = 0; i < n; ++i) spec.metric[i][i] = c;
  }
  if (!s.contains("f")) throw ConfigError("inline structure needs 'f'");
  spec.f = get_as<std::string>(s["f"], "f");
  if (s.contains("h")) {
    spec.h = s["h"].is_number() ? std::to_string(s["h"].get<double>()) : get_as<std::string>(s["h"], "h");
  }
  if (s.contains("case")) spec.case_tag = get_as<std::string>(s["case"], "case");
  if (!s.contains("domain")) throw ConfigError("inline structure needs 'domain'");
  for (const auto& iv : s["domain"]) {
    const auto pair = get_as<std::vector<double>>(iv, "domain");
    if (pair.size() != 2 || !(pair[0] < pair[1])) {
      throw ConfigError("each domain interval needs [lo, hi] with lo < hi");
    }
    spec.domain.emplace_back(pair[0], pair[1]);
  }
  if (static_cast<int>(spec.domain.size()) != n) throw ConfigError("'domain' needs n intervals");
  if (s.contains("density")) spec.density = get_as<std::string>(s["density"], "density");
  if (s.contains("pressure")) spec.pressure = get_as<std::string>(s["pressure"], "pressure");
  if (s.contains("solution")) spec.solution = get_as<bool>(s["solution"], "solution");
  return spec;
}

Expr parse_in(const MetricChart& chart, const std::string& text, const std::string& where) {
  try {
    return chart.parse(text);
  } catch (const ParseError& e) {
    throw ParseError("in " + where + ": " + e.what(), e.line(), e.column());
  }
}

std::vector<std::string> selected_suites(const RunConfig& config, const CatalogStructure& cs,
                                         std::vector<std::string>& notes) {
  const auto& all = suite_names();
  bool everything = config.suites.empty();
  for (const auto& s : config.suites) everything = everything || s == "all";
  if (!everything) {
    std::vector<std::string> out;
    for (const auto& s : all)
      if (std::find(config.suites.begin(), config.suites.end(), s) != config.suites.end())
        out.push_back(s);
    return out;
  }
  const auto& claimed = cs.default_suites.empty() ? all : cs.default_suites;
  std::vector<std::string> out;
  for (const auto& s : all) {
    if (std::find(claimed.begin(), claimed.end(), s) == claimed.end()) {
      notes.push_back("suite " + s + " left out of 'all': the structure does not claim it");
      continue;
    }
    out.push_back(s);
  }
  return out;
}

void print_tensor(std::ostream& os, const std::string& label, const RealTensor& t) {
  char buf[64];
  const int n = t.dim();
  if (t.rank() == 0) {
    std::snprintf(buf, sizeof buf, "% .10e", t[0]);
    os << label << " = " << buf << "\n";
    return;
  }
  if (t.rank() <= 2) {
    os << label << ":\n";
    const int rows = t.rank() == 1 ? 1 : n;
    for (int i = 0; i < rows; ++i) {
      os << "  ";
      for (int j = 0; j < n; ++j) {
        std::snprintf(buf, sizeof buf, "% .10e ", t.rank() == 1 ? t(j) : t(i, j));
        os << buf;
      }
      os << "\n";
    }
    return;
  }
  os << label << " (components with |value| > 1e-12):\n";
  std::vector<int> idx(t.rank());
  bool any = false;
  for (std::size_t f = 0; f < t.size(); ++f) {
    const double v = t.data()[f];
    if (std::abs(v) <= 1e-12) continue;
    any = true;
    t.unflatten(f, idx);
    os << "  [";
    for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k];
    std::snprintf(buf, sizeof buf, "] = % .10e\n", v);
    os << buf;
  }
  if (!any) os << "  (all zero)\n";
}

ordered_json tensor_json(const RealTensor& t) {
  ordered_json j;
  j["rank"] = t.rank();
  j["components"] = std::vector<double>(t.data().begin(), t.data().end());
  return j;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"symmetries",  "curvature_identities",
                                                 "einstein_type", "lemmas",
                                                 "divergences", "algebra",
                                                 "classification"};
  return names;
}

int required_jet_order(const std::string& suite) {
  if (suite == "symmetries") return 4;
  if (suite == "curvature_identities") return 5;
  if (suite == "einstein_type") return 3;
  if (suite == "lemmas") return 6;
  if (suite == "divergences") return 6;
  if (suite == "classification") return 3;
  return 0;
}

RunConfig parse_run_config(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("config parse error at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what(),
                     line, col);
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(doc,
             {"structure", "suites", "samples", "seed", "jet_order", "tolerances",
              "report_format", "algebra_trials", "level_set_points", "threads",
              "pfe_trace_times_f", "potential_guard"},
             "config");
  RunConfig c;
  if (!doc.contains("structure")) throw ConfigError("config needs a 'structure'");
  const auto& s = doc["structure"];
  if (s.is_string()) {
    c.catalog_name = s.get<std::string>();
  } else if (s.is_object() && s.contains("catalog")) {
    check_keys(s, {"catalog", "params"}, "structure");
    c.catalog_name = get_as<std::string>(s["catalog"], "structure.catalog");
    if (s.contains("params")) {
      for (const auto& [k, v] : s["params"].items())
        c.params[k] = get_as<double>(v, "structure.params." + k);
    }
  } else if (s.is_object()) {
    c.inline_structure = parse_inline(s);
  } else {
    throw ConfigError("'structure' must be a catalog name or an object");
  }
  if (doc.contains("suites")) {
    const auto& su = doc["suites"];
    if (su.is_string()) {
      c.suites = {su.get<std::string>()};
    } else {
      c.suites = get_as<std::vector<std::string>>(su, "suites");
    }
    for (const auto& name : c.suites) {
      const auto& all = suite_names();
      if (name != "all" && std::find(all.begin(), all.end(), name) == all.end()) {
        throw ConfigError("unknown suite '" + name + "'");
      }
    }
  }
  if (doc.contains("samples")) c.samples = get_as<int>(doc["samples"], "samples");
  if (c.samples < 1) throw ConfigError("'samples' must be at least 1");
  if (doc.contains("seed")) c.seed = get_as<std::uint64_t>(doc["seed"], "seed");
  if (doc.contains("jet_order")) c.jet_order = get_as<int>(doc["jet_order"], "jet_order");
  if (c.jet_order < 2 || c.jet_order > 10) throw ConfigError("'jet_order' must be in 2..10");
  if (doc.contains("algebra_trials"))
    c.algebra_trials = get_as<int>(doc["algebra_trials"], "algebra_trials");
  if (c.algebra_trials < 1) throw ConfigError("'algebra_trials' must be at least 1");
  if (doc.contains("level_set_points"))
    c.level_set_points = get_as<int>(doc["level_set_points"], "level_set_points");
  if (c.level_set_points < 2) throw ConfigError("'level_set_points' must be at least 2");
  if (doc.contains("threads")) c.threads = get_as<unsigned>(doc["threads"], "threads");
  if (doc.contains("tolerances")) {
    if (!doc["tolerances"].is_object()) throw ConfigError("'tolerances' must be an object");
    for (const auto& [k, v] : doc["tolerances"].items()) {
      bool known = false;
      for (const auto& d : identity_defs()) known = known || k == d.suite || k == key_of(d);
      if (!known) throw ConfigError("unknown tolerance key '" + k + "'");
      c.tolerances[k] = get_as<double>(v, "tolerances." + k);
    }
  }
  if (doc.contains("report_format"))
    c.report_format = get_as<std::string>(doc["report_format"], "report_format");
  if (c.report_format != "text" && c.report_format != "json") {
    throw ConfigError("'report_format' must be text or json");
  }
  if (doc.contains("pfe_trace_times_f"))
    c.structure_options.pfe_trace_times_f = get_as<bool>(doc["pfe_trace_times_f"], "pfe_trace_times_f");
  if (doc.contains("potential_guard"))
    c.structure_options.potential_guard = get_as<double>(doc["potential_guard"], "potential_guard");
  return c;
}

CatalogStructure build_structure(const RunConfig& config) {
  if (!config.inline_structure) return make_catalog_structure(config.catalog_name, config.params);
  const auto& spec = *config.inline_structure;
  const int n = static_cast<int>(spec.coords.size());
  if (n < 2) throw ConfigError("inline structure needs at least two coordinates");
  if (static_cast<int>(spec.metric.size()) != n) throw ConfigError("'metric' needs n rows");
  // Parse against a flat placeholder chart that carries the coordinate names.
  const MetricChart names_only = MetricChart::diagonal(
      spec.coords, std::vector<Expr>(n, 1.0), Box{spec.domain});
  std::vector<std::vector<Expr>> comps(n, std::vector<Expr>(n, Expr(0.0)));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(spec.metric[i].size()) != n) throw ConfigError("'metric' needs n columns");
    for (int j = 0; j < n; ++j)
      comps[i][j] = parse_in(names_only, spec.metric[i][j],
                             "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  MetricChart chart(spec.coords, std::move(comps), Box{spec.domain});
  EinsteinTypeStructure s{chart, parse_in(chart, spec.f, "f"), parse_in(chart, spec.h, "h"),
                          parse_case_tag(spec.case_tag), std::nullopt};
  if (spec.density || spec.pressure) {
    if (!spec.density || !spec.pressure) {
      throw ConfigError("perfect-fluid data needs both 'density' and 'pressure'");
    }
    s.fluid = PerfectFluidCoefficients{parse_in(chart, *spec.density, "density"),
                                       parse_in(chart, *spec.pressure, "pressure")};
  }
  CatalogStructure cs{"inline", std::move(s)};
  cs.solution = spec.solution;
  return cs;
}

ResidualReport run(const RunConfig& config) {
  const CatalogStructure cs = build_structure(config);
  ResidualReport report;
  report.structure = cs.name;
  report.dim = cs.structure.chart.dim();
  report.case_tag = to_string(cs.structure.tag);
  report.seed = config.seed;
  report.samples = config.samples;
  report.jet_order = config.jet_order;
  report.suites = selected_suites(config, cs, report.notes);
  for (const auto& s : report.suites) {
    const int need = required_jet_order(s);
    if (config.jet_order < need) {
      throw OrderExhausted("suite '" + s + "' needs jet order " + std::to_string(need) +
                               " but the run is configured with " +
                               std::to_string(config.jet_order),
                           need);
    }
  }
  const std::set<std::string> suites(report.suites.begin(), report.suites.end());

  std::map<std::string, Accumulator> acc;
  std::set<std::string> per_point_suites = suites;
  per_point_suites.erase("algebra");
  if (!per_point_suites.empty()) {
    const Box& box = cs.structure.chart.domain();
    std::vector<PointResults> results(config.samples);
    std::vector<PointNotes> notes(config.samples);
    parallel_for(config.samples, config.threads, [&](std::size_t k) {
      PointEvaluator ev(cs, config, per_point_suites, sample_point(box, config.seed, k), k);
      results[k] = ev.evaluate(notes[k]);
    });
    for (const auto& r : results)
      for (const auto& [key, value] : r) acc[key].add(value);

    PointNotes total;
    for (const auto& n : notes) {
      total.max_cotton = std::max(total.max_cotton, n.max_cotton);
      total.max_radial_weyl = std::max(total.max_radial_weyl, n.max_radial_weyl);
      total.energy_violations += n.energy_violations;
      total.weyl_dimension_warning = total.weyl_dimension_warning || n.weyl_dimension_warning;
    }
    if (total.weyl_dimension_warning) {
      report.notes.push_back("dimension 3: Weyl is identically zero; Bach identities omitted");
    }
    if (cs.structure.tag == CaseTag::kPerfectFluid && suites.count("einstein_type")) {
      report.notes.push_back("energy condition mu >= |rho| violated at " +
                             std::to_string(total.energy_violations) + " sample points");
    }
  }

  if (suites.count("classification") && cs.level_set) {
    Rng rng = make_rng(config.seed, 1'000'000);
    const auto points = cs.level_set(rng, config.level_set_points);
    auto& spread = acc["classification.level_set_spread"];
    auto& ident = acc["classification.level_set_identity"];
    try {
      const auto ls = check_level_set_gradient(cs.structure, points, 3);
      spread.add(relative_residual(ls.spread, 0.0));
      spread.evaluated += static_cast<int>(points.size()) - 1;
      if (cs.solution) {
        ident.add(ls.max_identity_residual);
        ident.evaluated += static_cast<int>(points.size()) - 1;
      }
    } catch (const CriticalPoint&) {
      spread.skipped += static_cast<int>(points.size());
    }
    if (!cs.solution) acc.erase("classification.level_set_identity");
  } else if (suites.count("classification")) {
    report.notes.push_back("no closed-form level sets for this structure; level-set checks omitted");
  }

  if (suites.count("algebra")) {
    AlgebraOptions opt;
    opt.threads = config.threads;
    IdentityDef hc{}, cn{};
    for (const auto& d : identity_defs()) {
      if (key_of(d) == "algebra.hessian_cotton_cancellation") hc = d;
      if (key_of(d) == "algebra.cotton_norm_contraction") cn = d;
    }
    opt.hessian_tolerance = tolerance_for(config, hc);
    opt.contraction_tolerance = tolerance_for(config, cn);
    const AlgebraReport ar = random_algebra_identity_suite(config.seed, config.algebra_trials, opt);
    auto& a = acc["algebra.hessian_cotton_cancellation"];
    a.evaluated = ar.trials;
    a.max = ar.max_hessian_residual;
    a.sum = ar.mean_hessian_residual * ar.trials;
    auto& b = acc["algebra.cotton_norm_contraction"];
    b.evaluated = ar.trials;
    b.max = ar.max_contraction_residual;
    b.sum = ar.mean_contraction_residual * ar.trials;
    for (std::size_t i = 0; i < ar.failures.size() && i < 5; ++i) {
      const auto& f = ar.failures[i];
      report.notes.push_back("algebra failure: " + f.identity + " at seed " +
                             std::to_string(f.seed) + ", trial " + std::to_string(f.trial));
    }
  }

  for (const auto& d : identity_defs()) {
    auto it = acc.find(key_of(d));
    if (it == acc.end()) continue;
    const Accumulator& a = it->second;
    IdentityRecord r;
    r.suite = d.suite;
    r.identity = d.name;
    r.anchor = d.anchor;
    r.evaluated = a.evaluated;
    r.skipped = a.skipped;
    r.max_relative = a.nan ? std::nan("") : a.max;
    r.mean_relative = a.evaluated ? a.sum / a.evaluated : 0.0;
    r.tolerance = tolerance_for(config, d);
    report.records.push_back(r);
  }
  finalize_verdicts(report);
  return report;
}

std::string list_catalog_text() {
  std::ostringstream os;
  for (const auto& e : catalog_entries()) {
    os << e.name << "\n  " << e.description << "\n  realizes: " << e.realizes << "\n";
    if (!e.params.empty()) {
      os << "  params:";
      for (const auto& p : e.params) os << " " << p.name << "=" << p.default_value;
      os << "\n";
      for (const auto& p : e.params) os << "    " << p.name << ": " << p.description << "\n";
    }
  }
  return os.str();
}

std::string list_catalog_json() {
  ordered_json doc = ordered_json::array();
  for (const auto& e : catalog_entries()) {
    ordered_json params = ordered_json::array();
    for (const auto& p : e.params)
      params.push_back({{"name", p.name}, {"default", p.default_value}, {"description", p.description}});
    doc.push_back({{"name", e.name},
                   {"description", e.description},
                   {"realizes", e.realizes},
                   {"params", params}});
  }
  return doc.dump(2) + "\n";
}

std::string describe(const CatalogStructure& cs, const std::vector<double>& point, bool json,
                     int jet_order) {
  const int n = cs.structure.chart.dim();
  if (static_cast<int>(point.size()) != n) {
    throw ConfigError("point needs " + std::to_string(n) + " coordinates");
  }
  const StructurePoint p(cs.structure, point, jet_order);
  const CurvatureBundle& b = p.bundle();

  std::vector<std::pair<std::string, RealTensor>> blocks;
  blocks.emplace_back("g", b.metric_value().g);
  blocks.emplace_back("Ric", values(b.ricci()));
  RealTensor r(n, {}, b.scalar_curvature().value());
  blocks.emplace_back("R", r);
  blocks.emplace_back("W", values(weyl(b)));
  if (b.order() >= 3) blocks.emplace_back("C", values(cotton(b)));
  if (n >= 4 && b.order() >= 4) blocks.emplace_back("B", values(bach(b).weyl_form));
  blocks.emplace_back("T", values(t_tensor(b, p.f())));
  blocks.emplace_back("grad f", values(b.gradient(p.f())));
  blocks.emplace_back("f", RealTensor(n, {}, p.f().value()));
  blocks.emplace_back("h", RealTensor(n, {}, p.h().value()));

  std::vector<std::pair<std::string, std::string>> rows;  // name, value or error
  auto row = [&](const std::string& name, auto&& fn) {
    try {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", fn());
      rows.emplace_back(name, buf);
    } catch (const Error& e) {
      rows.emplace_back(name, std::string("error: ") + e.what());
    }
  };
  row("principal", [&] { return residual_principal(p).relative(); });
  row("trace", [&] { return residual_trace(p).relative(); });
  row("grad_h", [&] { return residual_grad_h(p).relative(); });
  row("lemma fC", [&] { return residual_lemma_fC(p).relative(); });
  row("lemma bach", [&] { return residual_lemma_bach(p).relative(); });
  row("lemma second_order", [&] { return residual_lemma_second_order(p).relative(); });
  row("lemma third_order", [&] { return residual_lemma_third_order(p).relative(); });
  if (cs.structure.tag != CaseTag::kGeneric) {
    row("special case tensor", [&] { return special_case_residual(p).tensor_equation.relative(); });
    row("special case scalar", [&] { return special_case_residual(p).scalar_equation.relative(); });
  }

  if (json) {
    ordered_json doc;
    doc["structure"] = cs.name;
    doc["point"] = point;
    for (const auto& [name, t] : blocks) doc["tensors"][name] = tensor_json(t);
    for (const auto& [name, v] : rows) doc["residuals"][name] = v;
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << cs.name << " at " << format_point(point) << " (case " << to_string(cs.structure.tag)
     << ")\n";
  for (const auto& [name, t] : blocks) print_tensor(os, name, t);
  os << "relative residuals:\n";
  for (const auto& [name, v] : rows) os << "  " << name << ": " << v << "\n";
  return os.str();
}

int exit_code_for_exception(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const UnsupportedDimension*>(&e)) {
    return 2;
  }
  return 3;
}

}  // namespace etlab
