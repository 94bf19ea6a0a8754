//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_RECORDS_HPP
#define RAINSENSE_RECORDS_HPP

#include "rainsense/geo.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rainsense {

enum class Rat { lte4g, nr5g_sa };
enum class Operator { a, b, c, d };

std::string to_string(Rat rat);
std::string to_string(Operator op);
Rat rat_from_string(const std::string& s);
Operator operator_from_string(const std::string& s);

// One downlink measurement report.
struct LteRecord {
    std::uint64_t id = 0;
    GeoPoint loc;
    Rat rat = Rat::lte4g;
    Operator op = Operator::a;
    int rsrp = -100; // dBm, 3GPP report range [-156, -31]
    int sinr = 0;    // dB
    int rssi = -80;  // dBm, >= rsrp
    bool outdoor = true;
    std::int64_t timestamp = 0; // Unix seconds, UTC
};

// 3GPP RSRP report range enforced on every record.
constexpr int kRsrpMinDbm = -156;
constexpr int kRsrpMaxDbm = -31;

// Throws std::invalid_argument naming the violated field.
void validate_record(const LteRecord& rec);

// CSV schema (fixed column order, see README):
//   id,lat,lon,rat,operator,rsrp,sinr,rssi,outdoor,timestamp
// rat is "4G" or "5G_SA", operator one of A..D, outdoor 0/1, timestamp
// ISO-8601 UTC. Malformed rows raise errors with the 1-based row number and
// the offending field.
std::vector<LteRecord> parse_lte_csv(const std::string& path);
void write_lte_csv(const std::vector<LteRecord>& records, const std::string& path);

} // namespace rainsense

#endif // RAINSENSE_RECORDS_HPP
