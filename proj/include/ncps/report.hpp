#ifndef NCPS_REPORT_HPP
#define NCPS_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

namespace ncps {

enum class Outcome { holds, violated };

struct Witness {
    std::vector<double> point;
    std::vector<double> values;
    std::string detail;
};

/// Outcome of a sampled or grid check of an inequality `lhs <= rhs`.
/// max_defect is the largest observed lhs - rhs (positive means violated
/// beyond zero; the check's own tolerance decides the outcome).
struct AnalysisReport {
    std::string property;
    std::string grid;
    Outcome outcome = Outcome::holds;
    std::optional<Witness> witness;
    double max_defect = 0.0;
    std::size_t checked = 0;

    bool holds() const { return outcome == Outcome::holds; }
};

const char* to_string(Outcome outcome);

}  // namespace ncps

#endif  // NCPS_REPORT_HPP
