#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ibc/information.hpp"
#include "ibc/model_space.hpp"
#include "ibc/spectral.hpp"
#include "ibc/std_info.hpp"

namespace ibc {

/// Malformed input documents or option strings.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

/// 12 significant digits, '.' decimal point, independent of the global locale.
std::string format_number(double v);

class CsvWriter {
public:
    using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

    CsvWriter(std::ostream& out, std::vector<std::string> header);
    void row(const std::vector<Cell>& cells);

private:
    std::ostream& out_;
    std::size_t width_;
};

/// `{"kind": "power-law"|"explicit"|"matrix", "p", "m", "values", "matrix", "weights"}`.
/// Spectrum kinds produce the diagonal problem with that spectrum.
LinearProblem problem_from_json(const Json& doc);
SingularSpectrum spectrum_from_json(const Json& doc);

/// `power-law:p=1:m=64` or `explicit:2,2,1`.
SingularSpectrum parse_spectrum_spec(std::string_view spec);

/// JSON array of coefficient arrays.
InformationMap information_from_json(const Json& doc);
Json to_json(const InformationMap& info);

/// `{"terms": [{"p": real, "alpha": real}], "finite": {"index": value}}`, 1-based indices.
SymbolicFunctional functional_from_json(const Json& doc);
Json to_json(const SymbolicFunctional& l);

/// `{"grid": [...], "gram": [[...]], "S": [[...]]}`.
GridModel grid_model_from_json(const Json& doc);
Json to_json(const GridModel& model);

Matrix matrix_from_json(const Json& doc);
Json to_json(const Matrix& m);

Json read_json_file(const std::string& path);

/// Comma-separated list of nonnegative integers.
std::vector<std::size_t> parse_index_list(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);

} // namespace ibc
