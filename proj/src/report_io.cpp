#include "bmspec/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bmspec {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Matrix matrix_from_flat(std::size_t dim, const std::vector<double>& flat) {
    if (flat.size() != dim * dim)
        throw std::runtime_error("entry count does not match dim*dim");
    return Matrix(dim, dim, flat);
}

SymmetricOperator operator_from_json_text(const std::string& text) {
    json j = json::parse(text);
    auto dim = j.at("dim").get<std::size_t>();
    auto entries = j.at("entries").get<std::vector<double>>();
    return SymmetricOperator(matrix_from_flat(dim, entries));
}

SymmetricOperator operator_from_csv_text(const std::string& text) {
    std::vector<double> flat;
    std::size_t rows = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) flat.push_back(std::stod(cell));
    }
    if (rows == 0) throw std::runtime_error("empty CSV matrix");
    return SymmetricOperator(matrix_from_flat(rows, flat));
}

} // namespace

SymmetricOperator load_operator(const std::filesystem::path& path) {
    std::string text = slurp(path);
    if (path.extension() == ".json") return operator_from_json_text(text);
    if (path.extension() == ".csv") return operator_from_csv_text(text);
    // sniff: JSON starts with '{'
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return operator_from_json_text(text);
    return operator_from_csv_text(text);
}

GaussianMeasure measure_from_json_text(const std::string& text) {
    json j = json::parse(text);
    auto dim = j.at("dim").get<std::size_t>();
    auto cov = j.at("covariance").get<std::vector<double>>();
    NormKind kind = NormKind::L2;
    std::vector<double> weights;
    if (j.contains("norm")) {
        const auto& n = j.at("norm");
        kind = norm_kind_from_string(n.at("kind").get<std::string>());
        if (n.contains("weights")) weights = n.at("weights").get<std::vector<double>>();
    }
    return GaussianMeasure(matrix_from_flat(dim, cov), NormSpec(kind, std::move(weights)));
}

GaussianMeasure load_measure(const std::filesystem::path& path) {
    return measure_from_json_text(slurp(path));
}

std::string spectrum_to_json(const SignedSpectrum& s) {
    json j;
    j["pos"] = s.pos_values();
    j["neg"] = s.neg_values();
    j["zero_mult"] = s.zero_mult;
    return j.dump(2) + "\n";
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::logic_error("CsvWriter: cell count mismatch");
    rows_.push_back(std::move(cells));
}

std::string CsvWriter::str() const {
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    emit(header_);
    for (const auto& row : rows_) emit(row);
    return out.str();
}

void CsvWriter::write(const std::filesystem::path& path) const {
    write_text_file(path, str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

} // namespace bmspec
