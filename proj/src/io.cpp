#include "ibc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ibc {

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), width_(header.size())
{
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells)
{
    if (cells.size() != width_) throw std::logic_error("csv row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        std::visit(
            [this](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, double>)
                    out_ << format_number(c);
                else
                    out_ << c;
            },
            cells[i]);
    }
    out_ << '\n';
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
T get_field(const Json& doc, const char* key)
{
    if (!doc.is_object() || !doc.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("field '") + key + "' has the wrong type");
    }
}

} // namespace

Matrix matrix_from_json(const Json& doc)
{
    if (!doc.is_array()) throw ConfigError("matrix must be an array of rows");
    const auto rows = static_cast<Index>(doc.size());
    if (rows == 0) return Matrix(0, 0);
    const auto cols = static_cast<Index>(doc[0].size());
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& r = doc[static_cast<std::size_t>(i)];
        if (!r.is_array() || static_cast<Index>(r.size()) != cols) throw ConfigError("matrix rows must have equal length");
        for (Index j = 0; j < cols; ++j) {
            const auto& v = r[static_cast<std::size_t>(j)];
            if (!v.is_number()) throw ConfigError("matrix entries must be numbers");
            m(i, j) = v.get<double>();
        }
    }
    return m;
}

Json to_json(const Matrix& m)
{
    Json out = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

SingularSpectrum spectrum_from_json(const Json& doc)
{
    const auto kind = get_field<std::string>(doc, "kind");
    if (kind == "power-law") {
        const double p = get_field<double>(doc, "p");
        const auto m = get_field<std::size_t>(doc, "m");
        return make_spectrum(SpectrumKind::power_law, std::vector<double>{p}, m);
    }
    if (kind == "explicit") {
        const auto values = get_field<std::vector<double>>(doc, "values");
        return make_spectrum(SpectrumKind::explicit_values, values, values.size());
    }
    if (kind == "matrix") return problem_from_json(doc).spectrum();
    throw ConfigError("unknown kind '" + kind + "'");
}

LinearProblem problem_from_json(const Json& doc)
{
    const auto kind = get_field<std::string>(doc, "kind");
    if (kind != "matrix") return LinearProblem::diagonal(spectrum_from_json(doc));

    if (!doc.contains("matrix")) throw ConfigError("missing field 'matrix'");
    Matrix s = matrix_from_json(doc.at("matrix"));
    if (s.size() == 0) throw ConfigError("matrix must be nonempty");
    if (doc.contains("weights")) {
        const auto w = get_field<std::vector<double>>(doc, "weights");
        if (static_cast<Index>(w.size()) != s.cols()) throw ConfigError("weights must match the matrix column count");
        return LinearProblem(std::move(s), Vector(Eigen::Map<const Vector>(w.data(), s.cols())));
    }
    const Index m = s.cols();
    return LinearProblem(std::move(s), SourceMetric::identity(m));
}

SingularSpectrum parse_spectrum_spec(std::string_view spec)
{
    const auto colon = spec.find(':');
    const std::string kind(spec.substr(0, colon));
    const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

    if (kind == "explicit") {
        const auto values = parse_real_list(rest);
        if (values.empty()) throw ConfigError("explicit spectrum needs values");
        return make_spectrum(SpectrumKind::explicit_values, values, values.size());
    }
    if (kind != "power-law") throw ConfigError("unknown spectrum kind '" + kind + "'");

    double p = std::nan("");
    long long m = -1;
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto next = rest.find(':', pos);
        if (next == std::string_view::npos) next = rest.size();
        const std::string_view item = rest.substr(pos, next - pos);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key=value in spectrum spec");
        const std::string key(item.substr(0, eq));
        const std::string val(item.substr(eq + 1));
        try {
            if (key == "p")
                p = std::stod(val);
            else if (key == "m")
                m = std::stoll(val);
            else
                throw ConfigError("unknown spectrum parameter '" + key + "'");
        } catch (const std::logic_error&) {
            throw ConfigError("bad value for spectrum parameter '" + key + "'");
        }
        pos = next + 1;
    }
    if (std::isnan(p) || m < 0) throw ConfigError("power-law spectrum needs p and m");
    return make_spectrum(SpectrumKind::power_law, std::vector<double>{p}, static_cast<std::size_t>(m));
}

InformationMap information_from_json(const Json& doc)
{
    if (!doc.is_array()) throw ConfigError("information must be an array of coefficient arrays");
    InformationMap out;
    for (const auto& row : doc) {
        if (!row.is_array()) throw ConfigError("each functional must be an array of numbers");
        std::vector<double> v;
        try {
            v = row.get<std::vector<double>>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("each functional must be an array of numbers");
        }
        if (!out.empty() && static_cast<Index>(v.size()) != out[0].size()) throw ConfigError("functionals must share one dimension");
        out.append(Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())));
    }
    return out;
}

Json to_json(const InformationMap& info)
{
    Json out = Json::array();
    for (const auto& l : info.functionals()) out.push_back(std::vector<double>(l.data(), l.data() + l.size()));
    return out;
}

SymbolicFunctional functional_from_json(const Json& doc)
{
    if (!doc.is_object()) throw ConfigError("functional must be an object");
    std::vector<PowerTerm> terms;
    if (doc.contains("terms")) {
        if (!doc.at("terms").is_array()) throw ConfigError("'terms' must be an array");
        for (const auto& t : doc.at("terms")) terms.push_back({get_field<double>(t, "p"), get_field<double>(t, "alpha")});
    }
    std::map<std::size_t, double> finite;
    if (doc.contains("finite")) {
        if (!doc.at("finite").is_object()) throw ConfigError("'finite' must be an object");
        for (const auto& [k, v] : doc.at("finite").items()) {
            std::size_t idx = 0;
            const auto res = std::from_chars(k.data(), k.data() + k.size(), idx);
            if (res.ec != std::errc{} || res.ptr != k.data() + k.size() || idx == 0)
                throw ConfigError("finite-part keys must be positive integers");
            if (!v.is_number()) throw ConfigError("finite-part values must be numbers");
            finite[idx] += v.get<double>();
        }
    }
    return SymbolicFunctional(std::move(terms), std::move(finite));
}

Json to_json(const SymbolicFunctional& l)
{
    Json terms = Json::array();
    for (const auto& t : l.terms()) terms.push_back({{"p", t.exponent}, {"alpha", t.coefficient}});
    Json finite = Json::object();
    for (const auto& [i, v] : l.finite_part()) finite[std::to_string(i)] = v;
    return {{"terms", terms}, {"finite", finite}};
}

GridModel grid_model_from_json(const Json& doc)
{
    GridModel model;
    model.grid = get_field<std::vector<double>>(doc, "grid");
    if (!doc.contains("gram") || !doc.contains("S")) throw ConfigError("grid model needs 'gram' and 'S'");
    model.gram = matrix_from_json(doc.at("gram"));
    model.s = matrix_from_json(doc.at("S"));
    model.validate();
    return model;
}

Json to_json(const GridModel& model)
{
    return {{"grid", model.grid}, {"gram", to_json(model.gram)}, {"S", to_json(model.s)}};
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
}

std::vector<std::size_t> parse_index_list(std::string_view text)
{
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size() && !text.empty()) {
        auto next = text.find(',', pos);
        if (next == std::string_view::npos) next = text.size();
        const std::string_view item = text.substr(pos, next - pos);
        std::size_t v = 0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size())
            throw ConfigError("bad integer '" + std::string(item) + "' in list");
        out.push_back(v);
        pos = next + 1;
        if (next == text.size()) break;
    }
    return out;
}

std::vector<double> parse_real_list(std::string_view text)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (!text.empty()) {
        auto next = text.find(',', pos);
        if (next == std::string_view::npos) next = text.size();
        const std::string item(text.substr(pos, next - pos));
        std::istringstream is(item);
        is.imbue(std::locale::classic());
        double v = 0.0;
        if (item.empty() || !(is >> v) || !is.eof()) throw ConfigError("bad number '" + item + "' in list");
        out.push_back(v);
        if (next == text.size()) break;
        pos = next + 1;
    }
    return out;
}

} // namespace ibc
