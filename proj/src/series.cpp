#include "evt/series.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "evt/errors.hpp"

namespace evt {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

long parse_int(std::string_view s, std::size_t line_no, const char* what) {
    s = trim(s);
    long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(std::string("malformed ") + what + " '" + std::string(s) + "'", line_no);
    return v;
}

double parse_real(std::string_view s, std::size_t line_no) {
    s = trim(s);
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(s), &used);
        if (used != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError("malformed rate '" + std::string(s) + "'", line_no);
    }
}

bool looks_like_header(std::string_view line) {
    return line.empty() || !(line.front() >= '0' && line.front() <= '9');
}

}  // namespace

std::vector<double> IncidenceSeries::rates() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.rate);
    return out;
}

IncidenceSeries parse_series(std::string_view csv) {
    IncidenceSeries series;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool first_data_row = true;
    while (pos <= csv.size()) {
        const std::size_t eol = csv.find('\n', pos);
        std::string_view line =
            csv.substr(pos, eol == std::string_view::npos ? csv.size() - pos : eol - pos);
        pos = (eol == std::string_view::npos) ? csv.size() + 1 : eol + 1;
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (first_data_row && looks_like_header(line)) {
            first_data_row = false;
            continue;
        }
        first_data_row = false;

        const auto fields = split(line, ',');
        WeeklyRecord rec;
        if (fields.size() == 2) {
            // "YYYYWww" or compact "YYYYww"
            std::string_view wk = trim(fields[0]);
            std::string ystr, wstr;
            if (wk.size() == 7 && (wk[4] == 'W' || wk[4] == 'w')) {
                ystr = std::string(wk.substr(0, 4));
                wstr = std::string(wk.substr(5));
            } else if (wk.size() == 6) {
                ystr = std::string(wk.substr(0, 4));
                wstr = std::string(wk.substr(4));
            } else {
                throw ParseError("malformed week field '" + std::string(wk) + "'", line_no);
            }
            rec.iso_year = static_cast<int>(parse_int(ystr, line_no, "year"));
            rec.iso_week = static_cast<int>(parse_int(wstr, line_no, "week"));
            rec.rate = parse_real(fields[1], line_no);
        } else if (fields.size() == 3) {
            rec.iso_year = static_cast<int>(parse_int(fields[0], line_no, "year"));
            rec.iso_week = static_cast<int>(parse_int(fields[1], line_no, "week"));
            rec.rate = parse_real(fields[2], line_no);
        } else {
            throw ParseError("expected 2 or 3 comma-separated fields", line_no);
        }

        if (rec.iso_week < 1 || rec.iso_week > 53)
            throw ParseError("iso week out of range 1..53", line_no);
        if (rec.rate < 0.0) throw ParseError("negative incidence rate", line_no);
        if (!series.records.empty()) {
            const auto& prev = series.records.back();
            if (rec.iso_year < prev.iso_year ||
                (rec.iso_year == prev.iso_year && rec.iso_week <= prev.iso_week))
                throw ParseError("weeks not strictly increasing", line_no);
        }
        series.records.push_back(rec);
    }
    if (series.records.empty()) throw ParseError("no data rows", line_no);
    return series;
}

IncidenceSeries load_series(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_series(buf.str());
}

}  // namespace evt
