#include "nsa/catalog.hpp"

#include "fixtures_data.hpp"
#include "nsa/error.hpp"
#include "nsa/printer.hpp"

#include <algorithm>
#include <future>
#include <sstream>

namespace nsa {

namespace {

CatalogEntry row(std::string id, std::string file, std::string title, std::string constraints,
                 SelfAdjointness expected) {
  CatalogEntry e;
  e.id = std::move(id);
  e.file = std::move(file);
  e.title = std::move(title);
  e.constraints = std::move(constraints);
  e.classification_row = true;
  e.phi = "general";
  e.expected = expected;
  return e;
}

CatalogEntry worked(std::string id, std::string file, std::string title, std::string constraints) {
  CatalogEntry e;
  e.id = std::move(id);
  e.file = std::move(file);
  e.title = std::move(title);
  e.constraints = std::move(constraints);
  return e;
}

std::vector<CatalogEntry> build_entries() {
  using SA = SelfAdjointness;
  std::vector<CatalogEntry> entries;

  {
    auto e = row("3-I", "t3i.nsa", "u_t + a u u_xxx + 3a u_x u_xx + c u^2 u_x", "d = 0, b = 3a, c != 0",
                 SA::nonlinear);
    e.refuted = {"u"};
    entries.push_back(std::move(e));
  }
  entries.push_back(row("3-II", "t3ii.nsa", "u_t + a u u_xxx + 3a u_x u_xx", "d = 0, b = 3a, c = 0", SA::nonlinear));
  {
    auto e = row("3-III", "t3iii.nsa", "u_t + a u u_xxx + c u^2 u_x", "d = 0, b = 0, c != 0", SA::quasi);
    e.specializations = {{{{"c2", Rational(0)}}, SA::quasi}};
    e.refuted = {"u"};
    entries.push_back(std::move(e));
  }
  {
    auto e = row("3-IV", "t3iv.nsa", "u_t + a u u_xxx", "d = 0, b = 0, c = 0; A' = a", SA::weak);
    e.specializations = {
        {{{"c1", Rational(0)}, {"c2", Rational(0)}, {"c3", Rational(0)}}, SA::quasi},
        {{{"c1", Rational(0)}, {"c2", Rational(0)}, {"c4", Rational(0)}}, SA::weak},
    };
    e.notes = {"A is an antiderivative of a; with a = 1 the substitution reduces to the x^3/u - 6t family"};
    Consistency c;
    c.functions = {{"A", "t"}, {"a", "1"}};
    c.params = {{"c1", Rational(1)}, {"c2", Rational(0)}, {"c3", Rational(0)}, {"c4", Rational(0)}, {"c5", Rational(0)}};
    c.file = "w32b.nsa";
    c.phi = "cubic";
    e.consistency.push_back(std::move(c));
    entries.push_back(std::move(e));
  }
  {
    auto e = row("5-I", "t5i.nsa", "u_t + d u_xxxxx + a u u_xxx + b u_x u_xx + c u^2 u_x", "d != 0, b != 2a, 3a",
                 SA::nonlinear);
    e.witness = {{"a", "1"}, {"b", "1"}, {"c", "1"}, {"d", "1"}};
    e.refuted_at_witness = {"u", "c1*u"};
    e.notes = {"constants also satisfy rows 5-II and 5-III; rows are recorded as printed"};
    entries.push_back(std::move(e));
  }
  {
    auto e = row("5-II", "t5ii.nsa", "u_t + d u_xxxxx + a u u_xxx + 3a u_x u_xx + c u^2 u_x",
                 "d != 0, b = 3a, a != 0, c != 0", SA::nonlinear);
    e.refuted = {"u"};
    entries.push_back(std::move(e));
  }
  entries.push_back(row("5-III", "t5iii.nsa", "u_t + d u_xxxxx + a u u_xxx + 3a u_x u_xx",
                        "d != 0, b = 3a, a != 0, c = 0", SA::nonlinear));
  {
    auto e = row("5-IV", "t5iv.nsa", "u_t + d u_xxxxx + a u u_xxx + 2a u_x u_xx + c u^2 u_x",
                 "d != 0, b = 2a, a != 0", SA::quasi);
    e.specializations = {{{{"c1", Rational(1)}, {"c2", Rational(0)}}, SA::strict}};
    entries.push_back(std::move(e));
  }
  {
    auto e = row("5-V", "t5v.nsa", "u_t + d u_xxxxx + c u^2 u_x", "d != 0, a = b = 0, c != 0", SA::quasi);
    e.specializations = {{{{"c1", Rational(1)}, {"c2", Rational(0)}}, SA::strict}};
    entries.push_back(std::move(e));
  }
  entries.push_back(
      row("2-R", "t2r.nsa", "u_t + b u_x u_xx + c u^2 u_x", "a = d = 0", SA::nonlinear));

  {
    auto e = worked("W31", "w31.nsa", "u_t + u u_xxx + t u^2 u_x", "a = 1, c = t");
    e.non_symmetries = {"time_scaling"};
    e.raw_comparisons = {
        {"X", "derived_c0", false, true, ""},
        {"X", "printed_c0", false, false, "printed density carries t*u^2*u_x; tau*c(t) gives t^2*u^2*u_x"},
    };
    Derivation d;
    d.symmetry = "X";
    d.phi = "one";
    d.expected = "verified";
    d.transfer = "transfer";
    e.derivations = {d};
    e.vectors = {
        {"printed", VectorSource::published, false, "printed flux t*u^3 + 2*u*u_xx - u_x^2/2 is not conserved"},
        {"verified", VectorSource::divergence_verified, true, ""},
    };
    entries.push_back(std::move(e));
  }
  {
    auto e = worked("W32a", "w32a.nsa", "u_t + u u_xxx", "a = 1, b = c = d = 0");
    e.raw_comparisons = {{"translation", "raw", true, true, ""}};
    Derivation d;
    d.symmetry = "translation";
    d.phi = "log";
    d.localized = "localized";
    d.expected = "verified";
    d.transfer = "transfer";
    Derivation one;
    one.symmetry = "translation";
    one.phi = "one";
    one.trivial = true;
    Derivation inverse = one;
    inverse.phi = "inverse";
    e.derivations = {d, one, inverse};
    e.vectors = {
        {"printed", VectorSource::published, false, "printed density -ln(u) has the wrong sign"},
        {"verified", VectorSource::divergence_verified, true, ""},
    };
    entries.push_back(std::move(e));
  }
  {
    auto e = worked("W32b", "w32b.nsa", "u_t + u u_xxx", "a = 1, b = c = d = 0");
    Derivation d;
    d.symmetry = "translation";
    d.phi = "cubic";
    d.localized = "localized";
    d.expected = "verified";
    d.transfer = "transfer";
    e.derivations = {d};
    e.vectors = {
        {"printed", VectorSource::published, true, ""},
        {"verified", VectorSource::divergence_verified, true, ""},
    };
    entries.push_back(std::move(e));
  }
  {
    auto e = worked("W33", "w33.nsa", "u_t + u_xxxxx + t^p u^2 u_x", "d = 1, c = t^p (f stands for t^p)");
    Derivation d;
    d.symmetry = "X";
    d.phi = "one";
    d.expected = "verified";
    d.transfer = "transfer";
    Derivation degenerate = d;
    degenerate.expected.clear();
    degenerate.transfer.clear();
    degenerate.trivial = true;
    degenerate.params = {{"p", Rational(-2, 5)}};
    e.derivations = {d, degenerate};
    e.vectors = {
        {"printed", VectorSource::published, true, ""},
        {"verified", VectorSource::divergence_verified, true, ""},
        {"misprint", VectorSource::earlier_misprint, false, "flux constant 5/3 must be replaced by 1/3"},
    };
    e.notes = {"flux agrees with the corrected constant 1/3"};
    entries.push_back(std::move(e));
  }

  for (auto& e : entries) e.document = parse(fixture_text(e.file));
  return entries;
}

class Recorder {
 public:
  explicit Recorder(EntryReport& report) : report_(report) {}

  void add(std::string name, bool passed, std::string detail = {}, bool discrepancy = false) {
    report_.claims.push_back({std::move(name), passed, std::move(detail), discrepancy});
  }

  /// Runs `check`, turning library errors into a failed claim.
  template <typename F>
  void guard(const std::string& name, F&& check) {
    try {
      check();
    } catch (const std::exception& ex) {
      add(name, false, std::string("error: ") + ex.what());
    }
  }

 private:
  EntryReport& report_;
};

std::string residual_detail(const DiffExpr& r) { return r.is_zero() ? std::string() : "residual: " + print(r); }

const SymmetryStmt& need_symmetry(const SourceDocument& doc, const std::string& name) {
  const auto* s = doc.symmetry(name);
  if (s == nullptr) throw InvalidArgument("fixture has no symmetry '" + name + "'");
  return *s;
}

const VectorStmt& need_vector(const SourceDocument& doc, const std::string& name) {
  const auto* v = doc.vector(name);
  if (v == nullptr) throw InvalidArgument("fixture has no vector '" + name + "'");
  return *v;
}

const ExpressionStmt& need_expression(const SourceDocument& doc, const std::string& name) {
  const auto* x = doc.expression(name);
  if (x == nullptr) throw InvalidArgument("fixture has no expression '" + name + "'");
  return *x;
}

const SubstitutionStmt& need_substitution(const SourceDocument& doc, const std::string& name) {
  const auto* s = doc.substitution(name);
  if (s == nullptr) throw InvalidArgument("fixture has no substitution '" + name + "'");
  return *s;
}

void check_substitution(Recorder& rec, const std::string& label, const Equation& eq, const DiffExpr& phi,
                        SelfAdjointness expected, const Context& ctx) {
  rec.guard(label, [&] {
    Substitution sub(phi);
    NsaReport r = nsa_check(eq, sub, ctx);
    DiffExpr forced = -partial_derivative(phi, Atom::jet('u', 0, 0), ctx);
    bool lambda_ok = equal(r.lambda, forced);
    bool class_ok = r.classification == expected;
    std::ostringstream detail;
    detail << "phi = " << print(phi) << ", lambda = " << print(r.lambda) << ", class = " << to_string(r.classification);
    if (!r.holds) detail << "; residual: " << print(r.residual);
    if (!class_ok) detail << "; expected " << to_string(expected);
    rec.add(label, r.holds && lambda_ok && class_ok, detail.str());
  });
}

void check_row(const CatalogEntry& entry, Recorder& rec) {
  const SourceDocument& doc = entry.document;
  const Context& ctx = *doc.context;
  const Equation& eq = doc.equation()->equation;
  const DiffExpr& phi = need_substitution(doc, entry.phi).substitution.phi();

  check_substitution(rec, "nsa " + entry.phi, eq, phi, entry.expected, ctx);
  for (const auto& spec : entry.specializations) {
    std::string label = "nsa " + entry.phi + " at";
    for (const auto& [name, value] : spec.params) label += " " + name + "=" + rational_to_string(value);
    check_substitution(rec, label, eq, substitute_params(phi, spec.params), spec.expected, ctx);
  }
  for (const auto& text : entry.refuted) {
    std::string label = "refuted phi = " + text;
    rec.guard(label, [&] {
      NsaReport r = nsa_check(eq, Substitution(parse_expression(text, ctx)), ctx);
      rec.add(label, !r.holds, r.holds ? "identity unexpectedly holds" : "residual: " + print(r.residual));
    });
  }
  if (!entry.witness.empty()) {
    std::string label = "witness";
    for (const auto& [name, value] : entry.witness) label += " " + name + "=" + value;
    rec.guard(label, [&] {
      DiffExpr lhs = eq.lhs();
      DiffExpr wphi = phi;
      for (const auto& [name, value] : entry.witness) {
        DiffExpr val = parse_expression(value, ctx);
        lhs = instantiate_function(lhs, name, val, ctx);
        wphi = instantiate_function(wphi, name, val, ctx);
      }
      Equation weq = Equation::from_lhs(lhs);
      NsaReport r = nsa_check(weq, Substitution(wphi), ctx);
      rec.add(label + ": nsa " + entry.phi, r.holds, residual_detail(r.residual));
      for (const auto& text : entry.refuted_at_witness) {
        NsaReport bad = nsa_check(weq, Substitution(parse_expression(text, ctx)), ctx);
        rec.add(label + ": refuted phi = " + text, !bad.holds,
                bad.holds ? "identity unexpectedly holds" : "residual: " + print(bad.residual));
      }
    });
  }
  {
    for (const auto& c : entry.consistency) {
      std::string label = "time rescaling matches " + c.file + " phi " + c.phi;
      rec.guard(label, [&] {
        DiffExpr value = substitute_params(phi, c.params);
        for (const auto& [name, text] : c.functions) {
          value = instantiate_function(value, name, parse_expression(text, ctx), ctx);
        }
        const auto& other = catalog_entries();
        auto target = std::find_if(other.begin(), other.end(), [&](const CatalogEntry& e) { return e.file == c.file; });
        if (target == other.end()) throw InvalidArgument("no catalog entry for " + c.file);
        const DiffExpr& expected = need_substitution(target->document, c.phi).substitution.phi();
        bool same = equal(value, expected);
        rec.add(label, same, same ? "" : print(value) + " vs " + print(expected));
      });
    }
  }
}

/// C0 - s*A0 = D_x h and s*A1 - C1 = D_t h, exactly.
bool transfer_identities_hold(const ConservedVector& before, const ConservedVector& after, const Context& ctx) {
  const DiffExpr& h = after.provenance.transfer;
  DiffExpr s(static_cast<long>(after.provenance.sign));
  DiffExpr lhs0 = before.c0 - s * after.c0;
  DiffExpr lhs1 = s * after.c1 - before.c1;
  return equal(lhs0, total_derivative(h, Direction::x, ctx)) && equal(lhs1, total_derivative(h, Direction::t, ctx));
}

void check_symmetries(const CatalogEntry& entry, Recorder& rec) {
  const SourceDocument& doc = entry.document;
  const Context& ctx = *doc.context;
  const Equation& eq = doc.equation()->equation;
  const DiffExpr* phi = nullptr;
  if (!entry.phi.empty()) phi = &need_substitution(doc, entry.phi).substitution.phi();

  for (const SymmetryStmt* s : doc.symmetries()) {
    bool expect_symmetry =
        std::find(entry.non_symmetries.begin(), entry.non_symmetries.end(), s->name) == entry.non_symmetries.end();
    std::string label = (expect_symmetry ? "symmetry " : "not a symmetry ") + s->name;
    rec.guard(label, [&] {
      DiffExpr action = prolonged_action(s->symmetry, eq, ctx);
      bool ok = action.is_zero() == expect_symmetry;
      rec.add(label, ok, action.is_zero() ? "" : "prolonged action: " + print(action));
    });
    if (!expect_symmetry) continue;

    std::string raw_label = "raw vector of " + s->name + " conserved on the combined system";
    rec.guard(raw_label, [&] {
      ConservedVector cv = ibragimov_vector(eq, s->symmetry, ctx, entry.id);
      std::vector<Equation> system{eq, adjoint_solved_form(eq, ctx)};
      DiffExpr r = verify_divergence(cv, system, ctx);
      rec.add(raw_label, r.is_zero(), residual_detail(r));
    });
    if (phi != nullptr) {
      std::string loc_label = "localized vector of " + s->name + " with phi " + entry.phi + " conserved";
      rec.guard(loc_label, [&] {
        ConservedVector cv = localize(ibragimov_vector(eq, s->symmetry, ctx, entry.id), eq, Substitution(*phi), ctx);
        DiffExpr r = verify_divergence(cv, eq, ctx);
        ConservedVector n = density_normalize(cv, eq, ctx);
        bool transfer_ok = transfer_identities_hold(cv, n, ctx);
        DiffExpr rn = verify_divergence(n, eq, ctx);
        rec.add(loc_label, r.is_zero() && rn.is_zero() && transfer_ok,
                !transfer_ok ? "transfer identities fail" : residual_detail(r.is_zero() ? rn : r));
      });
    }
  }
}

void check_worked(const CatalogEntry& entry, Recorder& rec) {
  const SourceDocument& doc = entry.document;
  const Context& ctx = *doc.context;
  const Equation& eq = doc.equation()->equation;

  for (const auto& cmp : entry.raw_comparisons) {
    std::string label = "raw " + cmp.symmetry + (cmp.expect_equal ? " matches " : " differs from ") + cmp.target;
    rec.guard(label, [&] {
      ConservedVector cv = ibragimov_vector(eq, need_symmetry(doc, cmp.symmetry).symmetry, ctx, entry.id);
      bool same;
      if (cmp.whole_vector) {
        const auto& v = need_vector(doc, cmp.target);
        same = equal(cv.c0, v.c0) && equal(cv.c1, v.c1);
      } else {
        same = equal(cv.c0, need_expression(doc, cmp.target).value);
      }
      std::string detail = same ? "" : "computed c0 = " + print(cv.c0);
      if (!cmp.expect_equal && !same) detail = cmp.note;
      rec.add(label, same == cmp.expect_equal, detail, !cmp.expect_equal);
    });
  }

  for (const auto& d : entry.derivations) {
    std::string label = "derive " + d.symmetry + " with phi " + d.phi;
    for (const auto& [name, value] : d.params) label += " at " + name + "=" + rational_to_string(value);
    rec.guard(label, [&] {
      const auto& X = need_symmetry(doc, d.symmetry).symmetry;
      Substitution sub = need_substitution(doc, d.phi).substitution;
      ConservedVector cv = localize(ibragimov_vector(eq, X, ctx, entry.id), eq, sub, ctx);
      // Specialized parameters also enter the equation and the derivative rules.
      Context special_ctx = ctx.with_param_values(d.params);
      Equation special_eq = Equation::from_lhs(substitute_params(eq.lhs(), d.params));
      const Context& dctx = d.params.empty() ? ctx : special_ctx;
      const Equation& deq = d.params.empty() ? eq : special_eq;
      if (!d.params.empty()) {
        cv.c0 = substitute_params(cv.c0, d.params);
        cv.c1 = substitute_params(cv.c1, d.params);
      }
      if (!d.localized.empty()) {
        const auto& v = need_vector(doc, d.localized);
        bool same = equal(cv.c0, v.c0) && equal(cv.c1, v.c1);
        rec.add(label + ": localized matches " + d.localized, same,
                same ? "" : "computed (" + print(cv.c0) + ", " + print(cv.c1) + ")");
      }
      DiffExpr r = verify_divergence(cv, deq, dctx);
      rec.add(label + ": localized conserved", r.is_zero(), residual_detail(r));

      ConservedVector n = density_normalize(cv, deq, dctx);
      rec.add(label + ": transfer identities", transfer_identities_hold(cv, n, dctx),
              "h = " + print(n.provenance.transfer));
      DiffExpr rn = verify_divergence(n, deq, dctx);
      rec.add(label + ": normalized conserved", rn.is_zero(), residual_detail(rn));
      if (!d.transfer.empty()) {
        const DiffExpr& h = need_expression(doc, d.transfer).value;
        bool same = equal(n.provenance.transfer, h);
        rec.add(label + ": transfer term", same, same ? "" : "computed h = " + print(n.provenance.transfer));
      }
      if (!d.expected.empty()) {
        const auto& v = need_vector(doc, d.expected);
        bool density = equal(n.c0, v.c0);
        bool flux = reduce_mod(n.c1 - v.c1, deq, dctx).is_zero();
        rec.add(label + ": normalized matches " + d.expected, density && flux,
                "computed (" + print(n.c0) + ", " + print(reduce_mod(n.c1, deq, dctx)) + ")");
      }
      bool trivial = is_trivial(cv, deq, dctx);
      rec.add(label + (d.trivial ? ": trivial" : ": nontrivial"), trivial == d.trivial,
              "normalized (" + print(n.c0) + ", " + print(n.c1) + ")");
    });
  }

  for (const auto& ve : entry.vectors) {
    std::string source = ve.source == VectorSource::published        ? "printed"
                         : ve.source == VectorSource::divergence_verified ? "verified"
                                                                           : "misprint";
    std::string label = source + " vector " + ve.name + (ve.conserved ? " conserved" : " not conserved");
    rec.guard(label, [&] {
      const auto& v = need_vector(doc, ve.name);
      ConservedVector cv{v.c0, v.c1, {}};
      DiffExpr r = verify_divergence(cv, eq, ctx);
      bool conserved = r.is_zero();
      std::string detail = residual_detail(r);
      if (!ve.note.empty() && !conserved) detail = ve.note + "; " + detail;
      rec.add(label, conserved == ve.conserved, detail, !ve.conserved);
    });
  }
}

}  // namespace

bool EntryReport::ok() const {
  return std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.passed; });
}

std::string_view fixture_text(std::string_view file) {
  for (const auto& [name, text] : detail::embedded_fixtures()) {
    if (name == file) return text;
  }
  throw InvalidArgument("unknown fixture '" + std::string(file) + "'");
}

std::vector<std::string> fixture_files() {
  std::vector<std::string> names;
  for (const auto& entry : detail::embedded_fixtures()) names.emplace_back(entry.first);
  return names;
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = build_entries();
  return entries;
}

const CatalogEntry& catalog_entry(std::string_view id) {
  for (const auto& e : catalog_entries()) {
    if (e.id == id) return e;
  }
  throw InvalidArgument("unknown catalog id '" + std::string(id) + "'");
}

EntryReport verify_entry(std::string_view id) {
  const CatalogEntry& entry = catalog_entry(id);
  EntryReport report;
  report.id = entry.id;
  report.notes = entry.notes;
  Recorder rec(report);
  if (entry.classification_row) check_row(entry, rec);
  check_symmetries(entry, rec);
  if (!entry.classification_row) check_worked(entry, rec);
  return report;
}

std::vector<EntryReport> verify_catalog() {
  const auto& entries = catalog_entries();
  std::vector<std::future<EntryReport>> jobs;
  jobs.reserve(entries.size());
  for (const auto& e : entries) {
    jobs.push_back(std::async(std::launch::async, [id = e.id] { return verify_entry(id); }));
  }
  std::vector<EntryReport> reports;
  reports.reserve(jobs.size());
  for (auto& job : jobs) reports.push_back(job.get());
  return reports;
}

}  // namespace nsa
