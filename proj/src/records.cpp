//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/records.hpp"

#include "rainsense/radar.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rainsense {

std::string to_string(Rat rat) {
    return rat == Rat::lte4g ? "4G" : "5G_SA";
}

std::string to_string(Operator op) {
    switch (op) {
    case Operator::a: return "A";
    case Operator::b: return "B";
    case Operator::c: return "C";
    default: return "D";
    }
}

Rat rat_from_string(const std::string& s) {
    if (s == "4G") return Rat::lte4g;
    if (s == "5G_SA") return Rat::nr5g_sa;
    throw std::invalid_argument("unknown RAT tag: " + s);
}

Operator operator_from_string(const std::string& s) {
    if (s == "A") return Operator::a;
    if (s == "B") return Operator::b;
    if (s == "C") return Operator::c;
    if (s == "D") return Operator::d;
    throw std::invalid_argument("unknown operator tag: " + s);
}

void validate_record(const LteRecord& rec) {
    validate_geo_point(rec.loc);
    if (rec.rsrp < kRsrpMinDbm || rec.rsrp > kRsrpMaxDbm) {
        throw std::invalid_argument("rsrp " + std::to_string(rec.rsrp) + " outside [" +
                                    std::to_string(kRsrpMinDbm) + ", " +
                                    std::to_string(kRsrpMaxDbm) + "]");
    }
    if (rec.rssi < rec.rsrp) {
        throw std::invalid_argument("rssi " + std::to_string(rec.rssi) + " below rsrp " +
                                    std::to_string(rec.rsrp));
    }
}

namespace {

constexpr const char* kCsvHeader = "id,lat,lon,rat,operator,rsrp,sinr,rssi,outdoor,timestamp";

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

[[noreturn]] void row_error(const std::string& path, std::size_t row, const std::string& field,
                            const std::string& detail) {
    throw std::runtime_error(path + ": row " + std::to_string(row) + ", field '" + field +
                             "': " + detail);
}

long long parse_int_field(const std::string& path, std::size_t row, const std::string& field,
                          const std::string& text) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        row_error(path, row, field, "not an integer: '" + text + "'");
    }
    return value;
}

double parse_double_field(const std::string& path, std::size_t row, const std::string& field,
                          const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size() || !std::isfinite(v)) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        row_error(path, row, field, "not a finite number: '" + text + "'");
    }
}

} // namespace

std::vector<LteRecord> parse_lte_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open LTE CSV file: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": empty file, expected header '" +
                                 std::string(kCsvHeader) + "'");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kCsvHeader) {
        throw std::runtime_error(path + ": bad header, expected '" + std::string(kCsvHeader) +
                                 "', got '" + line + "'");
    }

    std::vector<LteRecord> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) {
            continue;
        }
        const auto fields = split_csv_row(line);
        if (fields.size() != 10) {
            throw std::runtime_error(path + ": row " + std::to_string(row) + ": expected 10 " +
                                     "fields, got " + std::to_string(fields.size()));
        }
        LteRecord rec;
        rec.id = static_cast<std::uint64_t>(parse_int_field(path, row, "id", fields[0]));
        rec.loc.lat = parse_double_field(path, row, "lat", fields[1]);
        rec.loc.lon = parse_double_field(path, row, "lon", fields[2]);
        try {
            rec.rat = rat_from_string(fields[3]);
        } catch (const std::exception& e) {
            row_error(path, row, "rat", e.what());
        }
        try {
            rec.op = operator_from_string(fields[4]);
        } catch (const std::exception& e) {
            row_error(path, row, "operator", e.what());
        }
        rec.rsrp = static_cast<int>(parse_int_field(path, row, "rsrp", fields[5]));
        rec.sinr = static_cast<int>(parse_int_field(path, row, "sinr", fields[6]));
        rec.rssi = static_cast<int>(parse_int_field(path, row, "rssi", fields[7]));
        if (fields[8] != "0" && fields[8] != "1") {
            row_error(path, row, "outdoor", "expected 0 or 1, got '" + fields[8] + "'");
        }
        rec.outdoor = fields[8] == "1";
        try {
            rec.timestamp = parse_iso8601_utc(fields[9]);
        } catch (const std::exception& e) {
            row_error(path, row, "timestamp", e.what());
        }
        try {
            validate_record(rec);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ": row " + std::to_string(row) + ": " + e.what());
        }
        records.push_back(rec);
    }
    return records;
}

void write_lte_csv(const std::vector<LteRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write LTE CSV file: " + path);
    }
    out << kCsvHeader << "\n";
    char buf[64];
    for (const auto& rec : records) {
        out << rec.id << ',';
        std::snprintf(buf, sizeof(buf), "%.9f", rec.loc.lat);
        out << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.9f", rec.loc.lon);
        out << buf << ',';
        out << to_string(rec.rat) << ',' << to_string(rec.op) << ',' << rec.rsrp << ','
            << rec.sinr << ',' << rec.rssi << ',' << (rec.outdoor ? 1 : 0) << ','
            << format_iso8601_utc(rec.timestamp) << "\n";
    }
}

} // namespace rainsense
