#include "nsa/cli.hpp"

#include "nsa/adjoint.hpp"
#include "nsa/catalog.hpp"
#include "nsa/conslaw.hpp"
#include "nsa/error.hpp"
#include "nsa/parser.hpp"
#include "nsa/printer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

namespace nsa::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Key-value report rendered either as "key: value" lines or as JSON.
class Report {
 public:
  void field(const std::string& key, const std::string& value) {
    json_[key] = value;
    text_ << key << ": " << value << "\n";
  }

  void flag(const std::string& key, bool value) {
    json_[key] = value;
    text_ << key << ": " << (value ? "yes" : "no") << "\n";
  }

  /// A list entry: `line` in text mode, `item` appended to json[key].
  void item(const std::string& key, const std::string& line, Json item) {
    if (!json_.contains(key)) {
      json_[key] = Json::array();
      text_ << key << ":\n";
    }
    json_[key].push_back(std::move(item));
    text_ << "  " << line << "\n";
  }

  void empty_list(const std::string& key) {
    if (!json_.contains(key)) {
      json_[key] = Json::array();
      text_ << key << ": (none)\n";
    }
  }

  std::string render(Status status, bool as_json) {
    if (as_json) {
      Json out;
      out["status"] = std::string(to_string(status));
      for (auto& [k, v] : json_.items()) out[k] = v;
      return out.dump(2) + "\n";
    }
    return "status: " + std::string(to_string(status)) + "\n" + text_.str();
  }

 private:
  Json json_ = Json::object();
  std::ostringstream text_;
};

struct Options {
  bool json = false;
  int order_cap = kDefaultOrderCap;
  std::string file;
  std::string eq_name;
  std::vector<std::string> params;
  std::string phi;
  std::string symmetry;
  std::string unknown = "phi";
  std::string vector;
  bool normalize = false;
  bool no_check = false;
  std::string catalog_id;
};

/// A parsed input file plus a context that may carry extra parameters.
struct Loaded {
  SourceDocument doc;
  std::shared_ptr<Context> ctx;
  const EquationStmt* eq = nullptr;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Loaded load(const Options& opt, std::vector<std::string>& warnings) {
  Loaded l{parse(read_file(opt.file), opt.order_cap), nullptr, nullptr};
  warnings.insert(warnings.end(), l.doc.warnings.begin(), l.doc.warnings.end());
  l.ctx = std::make_shared<Context>(*l.doc.context);
  for (const auto& p : opt.params) {
    if (!l.ctx->is_param(p)) l.ctx->declare_param(p);
  }
  l.eq = l.doc.equation(opt.eq_name);
  if (l.eq == nullptr) {
    throw InvalidArgument(opt.eq_name.empty() ? "no equation in '" + opt.file + "'"
                                              : "no equation named '" + opt.eq_name + "'");
  }
  return l;
}

/// A fixture substitution name or an expression.
DiffExpr resolve_phi(const Loaded& l, const std::string& text, std::vector<std::string>& warnings) {
  if (const auto* s = l.doc.substitution(text); s != nullptr && !text.empty()) return s->substitution.phi();
  return parse_expression(text, *l.ctx, &warnings);
}

/// A fixture symmetry name or an inline "tau = ...; xi = ...; eta = ...".
PointSymmetry resolve_symmetry(const Loaded& l, const std::string& text) {
  if (text.find('=') == std::string::npos) {
    const auto* s = l.doc.symmetry(text);
    if (s == nullptr) throw InvalidArgument("no symmetry named '" + text + "'");
    return s->symmetry;
  }
  return parse_symmetry(text, *l.ctx);
}

Status cmd_adjoint(const Options& opt, Report& r, std::vector<std::string>& warnings) {
  Loaded l = load(opt, warnings);
  const Context& ctx = *l.ctx;
  r.field("equation", print(l.eq->equation));
  r.field("lagrangian", print(formal_lagrangian(l.eq->equation)));
  r.field("adjoint", print_adjoint(adjoint_equation(l.eq->equation, ctx)));
  return Status::computed;
}

Status cmd_check_nsa(const Options& opt, Report& r, std::vector<std::string>& warnings) {
  Loaded l = load(opt, warnings);
  const Context& ctx = *l.ctx;
  DiffExpr phi;
  if (!opt.phi.empty()) {
    phi = resolve_phi(l, opt.phi, warnings);
  } else if (const auto* s = l.doc.substitution(); s != nullptr) {
    phi = s->substitution.phi();
  } else {
    throw InvalidArgument("no --phi given and the file declares no substitution");
  }
  Substitution sub(phi);
  NsaReport rep = nsa_check(l.eq->equation, sub, ctx);
  r.field("equation", print(l.eq->equation));
  r.field("phi", print(phi));
  r.field("lambda", print(rep.lambda));
  r.field("residual", print(rep.residual));
  r.field("classification", to_string(rep.classification));
  r.flag("phi_u_nonzero", rep.dependence.on_u);
  r.flag("phi_x_nonzero", rep.dependence.on_x);
  r.flag("phi_t_nonzero", rep.dependence.on_t);
  return rep.holds ? Status::verified : Status::refuted;
}

Status cmd_determining(const Options& opt, Report& r, std::vector<std::string>& warnings) {
  Loaded l = load(opt, warnings);
  if (!l.ctx->is_unknown(opt.unknown)) l.ctx->declare_unknown(opt.unknown);
  auto system = determining_system(l.eq->equation, opt.unknown, *l.ctx);
  r.field("equation", print(l.eq->equation));
  r.field("unknown", opt.unknown + "(x,t,u)");
  r.field("count", std::to_string(system.size()));
  for (const auto& d : system) {
    std::string key = print_factors(d.key);
    r.item("equations", "[" + key + "] " + print(d.coefficient) + " = 0",
           Json{{"monomial", key}, {"equation", print(d.coefficient)}});
  }
  if (system.empty()) r.empty_list("equations");
  return Status::computed;
}

Status cmd_check_symmetry(const Options& opt, Report& r, std::vector<std::string>& warnings) {
  Loaded l = load(opt, warnings);
  PointSymmetry X = resolve_symmetry(l, opt.symmetry);
  DiffExpr action = prolonged_action(X, l.eq->equation, *l.ctx);
  r.field("equation", print(l.eq->equation));
  r.field("symmetry", print(X));
  r.field("characteristic", print(X.characteristic()));
  r.field("residual", print(action));
  return action.is_zero() ? Status::verified : Status::refuted;
}

Status cmd_conslaw(const Options& opt, Report& r, std::vector<std::string>& warnings) {
  Loaded l = load(opt, warnings);
  const Context& ctx = *l.ctx;
  const Equation& eq = l.eq->equation;
  PointSymmetry X = resolve_symmetry(l, opt.symmetry);
  ConservedVector cv = ibragimov_vector(eq, X, ctx, l.eq->name);
  std::optional<DiffExpr> phi;
  if (!opt.phi.empty()) {
    phi = resolve_phi(l, opt.phi, warnings);
    Substitution sub(*phi);
    if (opt.no_check && !nsa_check(eq, sub, ctx).holds) {
      warnings.push_back("phi does not make the equation nonlinearly self-adjoint; localizing anyway");
    }
    cv = localize(cv, eq, sub, ctx, opt.no_check ? LocalizeCheck::warn : LocalizeCheck::enforce);
  } else if (opt.normalize) {
    throw InvalidArgument("--normalize needs --phi: the raw vector still contains v");
  }
  if (opt.normalize) cv = density_normalize(cv, eq, ctx);

  DiffExpr residual;
  std::string modulo;
  if (phi) {
    residual = verify_divergence(cv, eq, ctx);
    modulo = "F";
  } else {
    std::vector<Equation> system{eq, adjoint_solved_form(eq, ctx)};
    residual = verify_divergence(cv, system, ctx);
    modulo = "F, F*";
  }
  r.field("equation", print(eq));
  r.field("symmetry", print(X));
  if (phi) r.field("phi", print(*phi));
  r.field("c0", print(cv.c0));
  r.field("c1", print(cv.c1));
  r.field("transfer", print(cv.provenance.transfer));
  r.field("divergence_residual", print(residual));
  r.field("modulo", modulo);
  if (phi) r.flag("trivial", is_trivial(cv, eq, ctx));
  return residual.is_zero() ? Status::verified : Status::refuted;
}

Status cmd_check_vector(const Options& opt, Report& r, std::vector<std::string>& warnings) {
  Loaded l = load(opt, warnings);
  const auto* v = l.doc.vector(opt.vector);
  if (v == nullptr) throw InvalidArgument("no vector named '" + opt.vector + "'");
  ConservedVector cv{v->c0, v->c1, {}};
  DiffExpr residual = verify_divergence(cv, l.eq->equation, *l.ctx);
  r.field("equation", print(l.eq->equation));
  r.field("c0", print(cv.c0));
  r.field("c1", print(cv.c1));
  r.field("divergence_residual", print(residual));
  return residual.is_zero() ? Status::verified : Status::refuted;
}

Status cmd_fmt(const Options& opt, Report& r, std::vector<std::string>& warnings, std::string& raw) {
  SourceDocument doc = parse(read_file(opt.file), opt.order_cap);
  warnings.insert(warnings.end(), doc.warnings.begin(), doc.warnings.end());
  raw = print(doc);
  r.field("source", raw);
  return Status::computed;
}

Status cmd_catalog_list(Report& r) {
  for (const auto& e : catalog_entries()) {
    r.item("entries", e.id + "  " + e.title + "  [" + e.constraints + "]",
           Json{{"id", e.id}, {"file", e.file}, {"equation", e.title}, {"constraints", e.constraints},
                {"classification_row", e.classification_row}});
  }
  return Status::computed;
}

Status cmd_catalog_verify(const Options& opt, Report& r) {
  std::vector<EntryReport> reports;
  if (opt.catalog_id.empty()) {
    reports = verify_catalog();
  } else {
    reports.push_back(verify_entry(opt.catalog_id));
  }
  std::size_t passed = 0;
  std::size_t total = 0;
  std::size_t discrepancies = 0;
  bool all_ok = true;
  for (const auto& rep : reports) {
    all_ok = all_ok && rep.ok();
    for (const auto& c : rep.claims) {
      ++total;
      if (c.passed) ++passed;
      if (c.discrepancy && c.passed) ++discrepancies;
      std::string line = std::string(c.passed ? "PASS " : "FAIL ") + rep.id + ": " + c.name;
      if (c.discrepancy) line += " [published value fails]";
      if (!c.detail.empty() && (!c.passed || c.discrepancy)) line += " (" + c.detail + ")";
      r.item("claims", line,
             Json{{"entry", rep.id}, {"claim", c.name}, {"passed", c.passed}, {"discrepancy", c.discrepancy},
                  {"detail", c.detail}});
    }
  }
  for (const auto& rep : reports) {
    for (const auto& n : rep.notes) r.item("notes", rep.id + ": " + n, Json{{"entry", rep.id}, {"note", n}});
  }
  r.field("entries", std::to_string(reports.size()));
  r.field("claims_passed", std::to_string(passed) + "/" + std::to_string(total));
  r.field("published_discrepancies", std::to_string(discrepancies));
  return all_ok ? Status::verified : Status::refuted;
}

std::string join_lines(const std::vector<std::string>& lines, const std::string& prefix) {
  std::string out;
  for (const auto& l : lines) out += prefix + l + "\n";
  return out;
}

}  // namespace

std::string_view to_string(Status status) {
  switch (status) {
    case Status::verified:
      return "verified";
    case Status::refuted:
      return "refuted";
    case Status::computed:
      return "computed";
    case Status::invalid_input:
    case Status::unsupported:
      return "error";
  }
  return "error";
}

int exit_code(Status status) {
  switch (status) {
    case Status::verified:
    case Status::computed:
      return 0;
    case Status::refuted:
      return 1;
    case Status::invalid_input:
      return 2;
    case Status::unsupported:
      return 3;
  }
  return 2;
}

CommandResult run(const std::vector<std::string>& args) {
  Options opt;
  CLI::App app{"Nonlinear self-adjointness and conservation laws of evolution equations", "nsa"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "nsa 0.1.0");
  app.add_flag("--json", opt.json, "Emit one JSON document");
  app.add_option("--order-cap", opt.order_cap, "Maximum jet order")->check(CLI::Range(1, 64));

  auto file_command = [&](const std::string& name, const std::string& help) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option("file", opt.file, "Input .nsa file")->required();
    c->add_option("--eq", opt.eq_name, "Equation name (default: first)");
    c->add_option("--param", opt.params, "Declare extra parameters used in --phi or --symmetry");
    c->add_flag("--json", opt.json, "Emit one JSON document");
    return c;
  };

  CLI::App* adjoint = file_command("adjoint", "Print the adjoint equation");
  CLI::App* check_nsa = file_command("check-nsa", "Test nonlinear self-adjointness for a substitution");
  check_nsa->add_option("--phi", opt.phi, "Substitution name or expression (default: first in file)");
  CLI::App* determining = file_command("determining", "Print the determining system for phi(x,t,u)");
  determining->add_option("--unknown", opt.unknown, "Name of the unknown function");
  CLI::App* conslaw = file_command("conslaw", "Conserved vector of a point symmetry");
  conslaw->add_option("--symmetry", opt.symmetry, "Symmetry name or 'tau=..; xi=..; eta=..'")->required();
  conslaw->add_option("--phi", opt.phi, "Substitution name or expression for v");
  conslaw->add_flag("--normalize", opt.normalize, "Move total x-derivatives out of the density");
  conslaw->add_flag("--no-check", opt.no_check, "Localize even if phi fails the self-adjointness test");
  CLI::App* check_symmetry = file_command("check-symmetry", "Test a point symmetry");
  check_symmetry->add_option("--symmetry", opt.symmetry, "Symmetry name or 'tau=..; xi=..; eta=..'")->required();
  CLI::App* check_vector = file_command("check-vector", "Test the divergence identity of a stored vector");
  check_vector->add_option("--vector", opt.vector, "Vector name")->required();
  CLI::App* fmt = app.add_subcommand("fmt", "Print a file in canonical form");
  fmt->add_option("file", opt.file, "Input .nsa file")->required();
  CLI::App* catalog = app.add_subcommand("catalog", "Built-in catalog of classified equations");
  catalog->require_subcommand(1);
  catalog->add_flag("--json", opt.json, "Emit one JSON document");
  CLI::App* catalog_list = catalog->add_subcommand("list", "List catalog entries");
  catalog_list->add_flag("--json", opt.json, "Emit one JSON document");
  CLI::App* catalog_verify = catalog->add_subcommand("verify", "Verify every claim of one or all entries");
  catalog_verify->add_option("id", opt.catalog_id, "Entry id (default: all)");
  catalog_verify->add_flag("--json", opt.json, "Emit one JSON document");
  fmt->add_flag("--json", opt.json, "Emit one JSON document");

  CommandResult result;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.status = Status::computed;
    result.output = app.help();
    return result;
  } catch (const CLI::CallForVersion& e) {
    result.status = Status::computed;
    result.output = std::string(e.what()) + "\n";
    return result;
  } catch (const CLI::ParseError& e) {
    result.status = Status::invalid_input;
    result.diagnostics = std::string("error: ") + e.what() + "\n";
    return result;
  }

  Report report;
  std::vector<std::string> warnings;
  std::string fmt_source;
  std::string error_kind;
  std::string error_message;
  try {
    if (adjoint->parsed()) {
      result.status = cmd_adjoint(opt, report, warnings);
    } else if (check_nsa->parsed()) {
      result.status = cmd_check_nsa(opt, report, warnings);
    } else if (determining->parsed()) {
      result.status = cmd_determining(opt, report, warnings);
    } else if (conslaw->parsed()) {
      result.status = cmd_conslaw(opt, report, warnings);
    } else if (check_symmetry->parsed()) {
      result.status = cmd_check_symmetry(opt, report, warnings);
    } else if (check_vector->parsed()) {
      result.status = cmd_check_vector(opt, report, warnings);
    } else if (fmt->parsed()) {
      result.status = cmd_fmt(opt, report, warnings, fmt_source);
    } else if (catalog_list->parsed()) {
      result.status = cmd_catalog_list(report);
    } else if (catalog_verify->parsed()) {
      result.status = cmd_catalog_verify(opt, report);
    }
  } catch (const ParseError& e) {
    result.status = Status::invalid_input;
    error_kind = "parse";
    error_message = e.what();
  } catch (const DeclarationError& e) {
    result.status = Status::invalid_input;
    error_kind = "declaration";
    error_message = e.what();
  } catch (const UnsupportedError& e) {
    result.status = Status::unsupported;
    error_kind = "unsupported";
    error_message = e.what();
  } catch (const Error& e) {
    result.status = Status::invalid_input;
    error_kind = "invalid_argument";
    error_message = e.what();
  }

  result.diagnostics = join_lines(warnings, "warning: ");
  if (!error_kind.empty()) {
    result.diagnostics += "error: " + error_message + "\n";
    if (opt.json) {
      Json out;
      out["status"] = "error";
      out["error_kind"] = error_kind;
      out["message"] = error_message;
      result.output = out.dump(2) + "\n";
    }
    return result;
  }
  if (fmt->parsed() && !opt.json) {
    result.output = fmt_source;
  } else {
    result.output = report.render(result.status, opt.json);
  }
  return result;
}

}  // namespace nsa::cli
