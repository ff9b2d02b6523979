#include "nsa/catalog.hpp"
#include "nsa/cli.hpp"
#include "nsa/conslaw.hpp"
#include "nsa/error.hpp"
#include "nsa/parser.hpp"
#include "nsa/printer.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

namespace py = pybind11;

namespace {

using namespace nsa;

/// A parsed document with name lookups that raise instead of returning null.
class Document {
 public:
  explicit Document(const std::string& text, int order_cap) : doc_(parse(text, order_cap)) {}

  const Context& ctx() const { return *doc_.context; }

  const Equation& equation(const std::string& name) const {
    const EquationStmt* e = doc_.equation(name);
    if (!e) throw InvalidArgument(name.empty() ? "document has no equation" : "no equation named " + name);
    return e->equation;
  }

  Substitution substitution(const std::optional<std::string>& phi) const {
    if (!phi) {
      const SubstitutionStmt* s = doc_.substitution();
      if (!s) throw InvalidArgument("document has no substitution");
      return s->substitution;
    }
    if (const SubstitutionStmt* s = doc_.substitution(*phi)) return s->substitution;
    return Substitution(parse_expression(*phi, ctx()));
  }

  PointSymmetry symmetry(const std::string& text) const {
    if (const SymmetryStmt* s = doc_.symmetry(text)) return s->symmetry;
    if (text.find('=') != std::string::npos) return parse_symmetry(text, ctx());
    throw InvalidArgument("no symmetry named " + text);
  }

  std::string format() const { return print(doc_); }
  std::vector<std::string> warnings() const { return doc_.warnings; }

  std::vector<std::string> names(const std::string& kind) const {
    std::vector<std::string> out;
    if (kind == "symmetry") {
      for (const auto* s : doc_.symmetries()) out.push_back(s->name);
    } else if (kind == "substitution") {
      for (const auto* s : doc_.substitutions()) out.push_back(s->name);
    } else if (kind == "vector") {
      for (const auto* v : doc_.vectors()) out.push_back(v->name);
    } else {
      throw InvalidArgument("unknown statement kind " + kind);
    }
    return out;
  }

  const VectorStmt& vector(const std::string& name) const {
    const VectorStmt* v = doc_.vector(name);
    if (!v) throw InvalidArgument("no vector named " + name);
    return *v;
  }

 private:
  SourceDocument doc_;
};

py::dict nsa_report(const Document& d, const std::optional<std::string>& phi, const std::string& eq) {
  Substitution sub = d.substitution(phi);
  NsaReport r = nsa_check(d.equation(eq), sub, d.ctx());
  py::dict out;
  out["phi"] = print(sub.phi());
  out["holds"] = r.holds;
  out["lambda"] = print(r.lambda);
  out["residual"] = print(r.residual);
  out["classification"] = to_string(r.classification);
  return out;
}

py::dict conslaw(const Document& d, const std::string& symmetry, const std::optional<std::string>& phi,
                 bool normalize, const std::string& eq) {
  const Equation& f = d.equation(eq);
  ConservedVector cv = ibragimov_vector(f, d.symmetry(symmetry), d.ctx());
  py::dict out;
  if (!phi) {
    if (normalize) throw InvalidArgument("normalize requires phi");
    std::vector<Equation> system{f, adjoint_solved_form(f, d.ctx())};
    out["c0"] = print(cv.c0);
    out["c1"] = print(cv.c1);
    out["divergence_residual"] = print(verify_divergence(cv, system, d.ctx()));
    return out;
  }
  cv = localize(cv, f, d.substitution(phi), d.ctx());
  if (normalize) cv = density_normalize(cv, f, d.ctx());
  out["c0"] = print(cv.c0);
  out["c1"] = print(cv.c1);
  out["transfer"] = print(cv.provenance.transfer);
  out["sign"] = cv.provenance.sign;
  out["divergence_residual"] = print(verify_divergence(cv, f, d.ctx()));
  out["trivial"] = is_trivial(cv, f, d.ctx());
  return out;
}

py::dict entry_report(const EntryReport& r) {
  py::list claims;
  for (const auto& c : r.claims) {
    py::dict claim;
    claim["name"] = c.name;
    claim["passed"] = c.passed;
    claim["detail"] = c.detail;
    claim["discrepancy"] = c.discrepancy;
    claims.append(claim);
  }
  py::dict out;
  out["id"] = r.id;
  out["ok"] = r.ok();
  out["claims"] = claims;
  out["notes"] = r.notes;
  return out;
}

}  // namespace

PYBIND11_MODULE(_nsa, m) {
  m.doc() = "Nonlinear self-adjointness and conservation laws of evolution equations";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DeclarationError>(m, "DeclarationError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());

  m.attr("DEFAULT_ORDER_CAP") = kDefaultOrderCap;

  py::class_<Document>(m, "Document")
      .def(py::init<const std::string&, int>(), py::arg("text"), py::arg("order_cap") = kDefaultOrderCap)
      .def("format", &Document::format)
      .def_property_readonly("warnings", &Document::warnings)
      .def("names", &Document::names, py::arg("kind"))
      .def(
          "equation", [](const Document& d, const std::string& eq) { return print(d.equation(eq)); },
          py::arg("eq") = "")
      .def(
          "adjoint",
          [](const Document& d, const std::string& eq) { return print_adjoint(adjoint_equation(d.equation(eq), d.ctx())); },
          py::arg("eq") = "")
      .def("check_nsa", &nsa_report, py::arg("phi") = py::none(), py::arg("eq") = "")
      .def(
          "determining",
          [](const Document& d, const std::string& unknown, const std::string& eq) {
            std::vector<std::string> out;
            for (const auto& e : determining_system(d.equation(eq), unknown, d.ctx())) out.push_back(print(e.coefficient));
            return out;
          },
          py::arg("unknown") = "phi", py::arg("eq") = "")
      .def(
          "check_symmetry",
          [](const Document& d, const std::string& symmetry, const std::string& eq) {
            return print(prolonged_action(d.symmetry(symmetry), d.equation(eq), d.ctx()));
          },
          py::arg("symmetry"), py::arg("eq") = "")
      .def("conslaw", &conslaw, py::arg("symmetry"), py::arg("phi") = py::none(), py::arg("normalize") = false,
           py::arg("eq") = "")
      .def(
          "check_vector",
          [](const Document& d, const std::string& name, const std::string& eq) {
            const VectorStmt& v = d.vector(name);
            return print(verify_divergence(ConservedVector{v.c0, v.c1, {}}, d.equation(eq), d.ctx()));
          },
          py::arg("vector"), py::arg("eq") = "");

  m.def("catalog_ids", [] {
    std::vector<std::string> ids;
    for (const auto& e : catalog_entries()) ids.push_back(e.id);
    return ids;
  });
  m.def("fixture_text", [](const std::string& file) { return std::string(fixture_text(file)); }, py::arg("file"));
  m.def("verify_entry", [](const std::string& id) { return entry_report(verify_entry(id)); }, py::arg("id"));
  m.def("verify_catalog", [] {
    std::vector<EntryReport> reports;
    {
      py::gil_scoped_release release;
      reports = verify_catalog();
    }
    py::list out;
    for (const auto& r : reports) out.append(entry_report(r));
    return out;
  });
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        cli::CommandResult r = cli::run(args);
        return py::make_tuple(cli::exit_code(r.status), r.output, r.diagnostics);
      },
      py::arg("args"));
}
