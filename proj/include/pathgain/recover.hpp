#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathgain/forest.hpp"
#include "pathgain/galois.hpp"
#include "pathgain/network.hpp"
#include "pathgain/solve.hpp"

namespace pathgain {

struct NetworkCode {
  struct Coeff {
    std::string from, to;
    FieldElem value;
    friend bool operator==(const Coeff&, const Coeff&) = default;
  };
  struct Decode {
    NodeId sink = kNoNode;
    std::string edge;
    FieldElem value;
    friend bool operator==(const Decode&, const Decode&) = default;
  };

  FieldSpec field = FieldSpec::make(2, 1);
  /// a_{e',e} for every adjacent pair, virtual edges included.
  std::vector<Coeff> coeffs;
  std::vector<Decode> decode;
  /// f_e per real edge.
  std::map<std::string, std::vector<FieldElem>> edge_functions;
  /// c_e per real edge, aligned with the copies of e.
  std::map<std::string, std::vector<FieldElem>> scaling;

  std::optional<FieldElem> coeff(const std::string& from, const std::string& to) const;

  friend bool operator==(const NetworkCode& a, const NetworkCode& b) {
    return a.field == b.field && a.coeffs == b.coeffs && a.decode == b.decode &&
           a.edge_functions == b.edge_functions && a.scaling == b.scaling;
  }
};

/// Builds edge coefficients, coding vectors and decoders. `solution` must
/// assign every leaf variable by its g-name and satisfy the path-gain system
/// (NotASolution otherwise). Raises RankViolation
/// if some flow matrix F_e has two independent rows.
NetworkCode derive_code(const Problem& problem, const Forest& forest, const Solution& solution);

struct SinkReport {
  NodeId sink = kNoNode;
  int demand = 0;
  bool pass = false;
  std::vector<FieldElem> received;
};

struct VerifyReport {
  bool pass = true;
  std::vector<SinkReport> sinks;
};

/// Forward propagation from unit vectors at the sources using only the
/// coefficients; missing coefficients count as zero.
VerifyReport verify_code(const Problem& problem, const NetworkCode& code);

nlohmann::ordered_json code_to_json(const NetworkCode& code);
NetworkCode code_from_json(const nlohmann::ordered_json& doc);
NetworkCode code_load(const std::filesystem::path& path);
void code_save(const NetworkCode& code, const std::filesystem::path& path);
nlohmann::ordered_json verify_report_to_json(const VerifyReport& report, const FieldSpec& field);

}  // namespace pathgain
