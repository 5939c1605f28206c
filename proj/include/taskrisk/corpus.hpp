#pragma once

// Occupation-attribute ingest: parsing, listwise-complete matrix construction and z-scoring.

#include "taskrisk/table.hpp"

#include <Eigen/Dense>

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace taskrisk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// True for `NN-NNNN` (BLS) or `NN-NNNN.NN` (O*NET) codes.
bool is_soc_code(std::string_view code);

/// First seven characters (`NN-NNNN`) of a valid SOC code; used to merge O*NET and BLS keys.
std::string soc_prefix(std::string_view code);

struct AttributeObservation {
    std::string soc_code;
    std::string attribute_id;
    double importance = 0.0;  // [0, 100]
};

enum class AttributeCategory { Bottleneck, Hazard, Routine };

std::string_view to_string(AttributeCategory category);
AttributeCategory parse_category(std::string_view text);

struct CatalogEntry {
    std::string attribute_id;
    AttributeCategory category = AttributeCategory::Bottleneck;
    std::string label;
};

class AttributeCatalog {
public:
    AttributeCatalog() = default;
    /// Throws ConflictError on duplicate attribute ids.
    explicit AttributeCatalog(std::vector<CatalogEntry> entries);

    const std::vector<CatalogEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t count(AttributeCategory category) const;
    std::vector<std::string> attribute_ids() const;

private:
    std::vector<CatalogEntry> entries_;
};

/// Reconstructed 45-attribute catalog (41 bottleneck/routine + 4 hazard). The selection
/// is a best-effort reconstruction from the O*NET content model, not an authoritative list.
AttributeCatalog default_catalog();

struct OccupationMatrix {
    std::vector<std::string> occupation_ids;  // rows
    std::vector<std::string> attribute_ids;   // columns
    Matrix values;
    bool standardized = false;

    std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

struct DroppedOccupation {
    std::string soc_code;
    std::vector<std::string> missing_attribute_ids;
};

struct BuildResult {
    OccupationMatrix matrix;
    std::vector<DroppedOccupation> dropped;
};

/// soc_code -> year -> headcount.
struct EmploymentSeries {
    std::map<std::string, std::map<int, double>> records;

    /// Series for a code: exact match first, then match on the 6-digit prefix.
    const std::map<int, double>* find(std::string_view soc_code) const;
};

std::vector<AttributeObservation> parse_attribute_file(std::istream& in, TableFormat format = {});
EmploymentSeries parse_employment_file(std::istream& in, TableFormat format = {});
AttributeCatalog parse_catalog_file(std::istream& in, TableFormat format = {});

/// Columns follow catalog order; rows are sorted by soc_code. Occupations missing any
/// catalog attribute are dropped (listwise deletion) and listed in the result.
BuildResult build_matrix(const std::vector<AttributeObservation>& observations, const AttributeCatalog& catalog);

/// Column-wise z-scores with the sample (n-1) standard deviation.
OccupationMatrix standardize(const OccupationMatrix& matrix);

void write_drop_report(std::ostream& out, const std::vector<DroppedOccupation>& dropped);
void write_catalog(std::ostream& out, const AttributeCatalog& catalog);

/// Wide table `soc_code,<attribute ids...>`.
void write_matrix(std::ostream& out, const OccupationMatrix& matrix);
OccupationMatrix read_matrix(std::istream& in, bool standardized);

}  // namespace taskrisk
