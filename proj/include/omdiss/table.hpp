#pragma once

/**
 * @file table.hpp
 * @brief Column table with CSV output: one header line, comma delimiter,
 *        shortest round-trip decimals, empty cells for missing values.
 */

#include <charconv>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace omdiss {

/// Shortest decimal that parses back to the same double.
[[nodiscard]] inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

class Table {
public:
    using Cell = std::variant<std::monostate, double, std::string>;

    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {
        if (header_.empty()) throw std::invalid_argument("Table: header must not be empty");
    }

    void add_row(std::vector<Cell> row) {
        if (row.size() != header_.size()) {
            throw std::invalid_argument("Table: row has " + std::to_string(row.size()) + " cells, header has " +
                                        std::to_string(header_.size()));
        }
        rows_.push_back(std::move(row));
    }

    static Cell cell(std::optional<double> v) { return v ? Cell(*v) : Cell(); }

    [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
    [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    void write_csv(std::ostream& os) const {
        write_line(os, header_);
        std::vector<std::string> text(header_.size());
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (const auto* d = std::get_if<double>(&row[i])) {
                    text[i] = format_double(*d);
                } else if (const auto* s = std::get_if<std::string>(&row[i])) {
                    text[i] = *s;
                } else {
                    text[i].clear();
                }
            }
            write_line(os, text);
        }
    }

    [[nodiscard]] std::string to_csv() const {
        std::ostringstream os;
        write_csv(os);
        return os.str();
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) os << ',';
            os << fields[i];
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

}  // namespace omdiss
