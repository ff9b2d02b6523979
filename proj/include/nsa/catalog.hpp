#pragma once

#include "nsa/adjoint.hpp"
#include "nsa/parser.hpp"

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nsa {

/// A parameter specialization of the entry's phi and the class it must get.
struct Specialization {
  std::map<std::string, Rational> params;
  SelfAdjointness expected;
};

/// Localize the Ibragimov vector of `symmetry` with `phi`, normalize the
/// density and compare against the fixture.
struct Derivation {
  std::string symmetry;
  std::string phi;
  std::string localized;  // fixture vector equal to the localized pair, or empty
  std::string expected;   // fixture vector equal to the normalized pair, or empty
  std::string transfer;   // fixture expression equal to h, or empty
  bool trivial = false;
  std::map<std::string, Rational> params;  // applied before normalizing
};

enum class VectorSource { published, divergence_verified, earlier_misprint };

struct VectorExpectation {
  std::string name;
  VectorSource source;
  bool conserved;
  std::string note;  // reported when the printed vector fails
};

/// Compares the density of the raw (v-retaining) vector with a fixture
/// expression, or the whole raw pair with a fixture vector.
struct RawComparison {
  std::string symmetry;
  std::string target;
  bool whole_vector = false;
  bool expect_equal = true;
  std::string note;
};

/// Instantiates coefficient functions (in the listed order) and parameters
/// of the entry's phi and compares with a substitution of another fixture.
struct Consistency {
  std::vector<std::pair<std::string, std::string>> functions;
  std::map<std::string, Rational> params;
  std::string file;
  std::string phi;
};

struct CatalogEntry {
  std::string id;
  std::string file;
  std::string title;
  std::string constraints;
  bool classification_row = false;
  std::string phi;  // name of the substitution with free constants
  SelfAdjointness expected = SelfAdjointness::nonlinear;
  std::vector<Specialization> specializations;
  std::vector<std::string> refuted;         // phi texts that must fail
  std::vector<std::string> non_symmetries;  // fixture symmetries that must fail
  /// Concrete coefficient functions satisfying the row's side conditions.
  std::map<std::string, std::string> witness;
  std::vector<std::string> refuted_at_witness;
  std::vector<Derivation> derivations;
  std::vector<VectorExpectation> vectors;
  std::vector<RawComparison> raw_comparisons;
  std::vector<Consistency> consistency;
  std::vector<std::string> notes;

  SourceDocument document;
};

struct Claim {
  std::string name;
  bool passed = false;
  std::string detail;
  /// The claim concerns a published value that fails verification as
  /// expected; reported as an audit finding.
  bool discrepancy = false;
};

struct EntryReport {
  std::string id;
  std::vector<Claim> claims;
  std::vector<std::string> notes;

  bool ok() const;
};

/// 10 classification rows (3-I..3-IV, 5-I..5-V, 2-R) followed by the worked
/// examples W31, W32a, W32b, W33.
const std::vector<CatalogEntry>& catalog_entries();

const CatalogEntry& catalog_entry(std::string_view id);

/// Raw fixture text by file name ("t3iii.nsa").
std::string_view fixture_text(std::string_view file);
std::vector<std::string> fixture_files();

/// Throws InvalidArgument for an unknown id.
EntryReport verify_entry(std::string_view id);

/// All entries, verified concurrently.
std::vector<EntryReport> verify_catalog();

}  // namespace nsa
