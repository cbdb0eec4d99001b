#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bmspec/gaussian.hpp"
#include "bmspec/perturbation.hpp"
#include "bmspec/spectral.hpp"

namespace bmspec {

// "%.17g": round-trippable, locale-independent
std::string format_double(double v);

// Operator from JSON {dim, entries: row-major} or CSV (one matrix row per line).
SymmetricOperator load_operator(const std::filesystem::path& path);

// Measure from JSON {dim, covariance: row-major, norm: {kind, weights?}}.
GaussianMeasure load_measure(const std::filesystem::path& path);
GaussianMeasure measure_from_json_text(const std::string& text);

std::string spectrum_to_json(const SignedSpectrum& s);

struct CsvWriter {
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    void write(const std::filesystem::path& path) const;
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace bmspec
