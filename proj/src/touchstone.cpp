// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#include "cluskit/touchstone.hpp"

#include "cluskit/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cluskit {

namespace {

constexpr int kMaxPorts = 64;

struct DataLine {
    int line_no;
    std::vector<double> values;
};

struct OptionLine {
    double freq_scale = 1e9; // GHz default per Touchstone v1
    SParamFormat format = SParamFormat::MA;
    double z0 = 50.0;
};

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return s;
}

bool parse_double(const std::string& tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

OptionLine parse_option_line(const std::string& line, int line_no) {
    OptionLine opt;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok; // '#'
    std::vector<std::string> tokens;
    while (ss >> tok)
        tokens.push_back(upper(tok));

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& t = tokens[i];
        if (t == "HZ")
            opt.freq_scale = 1.0;
        else if (t == "KHZ")
            opt.freq_scale = 1e3;
        else if (t == "MHZ")
            opt.freq_scale = 1e6;
        else if (t == "GHZ")
            opt.freq_scale = 1e9;
        else if (t == "S") {
            // parameter type S; absent parameter letter defaults to S
        } else if (t == "Z" || t == "Y" || t == "H" || t == "G")
            throw validation_error(
                "only S-parameters are supported, got parameter type '" + t +
                "' on line " + std::to_string(line_no));
        else if (t == "RI")
            opt.format = SParamFormat::RI;
        else if (t == "MA")
            opt.format = SParamFormat::MA;
        else if (t == "DB")
            opt.format = SParamFormat::DB;
        else if (t == "R") {
            if (i + 1 >= tokens.size() || !parse_double(tokens[i + 1], opt.z0))
                throw parse_error("malformed option line: R not followed by "
                                  "a reference impedance",
                                  line_no);
            ++i;
        } else
            throw parse_error("malformed option line: unrecognized token '" +
                                  t + "'",
                              line_no);
    }
    if (opt.z0 <= 0.0)
        throw validation_error("reference impedance must be positive, got " +
                               std::to_string(opt.z0) + " on line " +
                               std::to_string(line_no));
    return opt;
}

// Splits the block structure for a given port count: every frequency block
// holds 1 + 2n^2 values and must begin at the start of a physical line.
// Returns false (instead of throwing) when the layout does not fit.
bool segment_blocks(const std::vector<DataLine>& lines, int n_ports,
                    std::vector<std::pair<int, std::vector<double>>>* blocks,
                    int* bad_line) {
    const std::size_t block_len = 1 + 2 * static_cast<std::size_t>(n_ports) *
                                          static_cast<std::size_t>(n_ports);
    std::vector<double> cur;
    int cur_line = 0;
    for (const DataLine& dl : lines) {
        if (cur.empty())
            cur_line = dl.line_no;
        cur.insert(cur.end(), dl.values.begin(), dl.values.end());
        if (cur.size() > block_len) {
            if (bad_line)
                *bad_line = dl.line_no;
            return false;
        }
        if (cur.size() == block_len) {
            if (blocks)
                blocks->emplace_back(cur_line, cur);
            cur.clear();
        }
    }
    if (!cur.empty()) {
        if (bad_line)
            *bad_line = cur_line;
        return false;
    }
    return blocks == nullptr || !blocks->empty();
}

bool frequencies_consistent(
    const std::vector<std::pair<int, std::vector<double>>>& blocks) {
    for (std::size_t i = 1; i < blocks.size(); ++i)
        if (blocks[i].second[0] <= blocks[i - 1].second[0])
            return false;
    return true;
}

int infer_n_ports(const std::vector<DataLine>& lines) {
    // Smallest port count whose block segmentation fits the whole file
    // with strictly increasing frequencies. The monotonicity requirement
    // resolves layout ambiguity (e.g. 2-port vs 4-port first lines both
    // carry 9 values).
    for (int n = 1; n <= kMaxPorts; ++n) {
        std::vector<std::pair<int, std::vector<double>>> blocks;
        if (segment_blocks(lines, n, &blocks, nullptr) &&
            frequencies_consistent(blocks))
            return n;
    }
    throw parse_error("unable to infer port count from data layout",
                      lines.empty() ? 0 : lines.front().line_no);
}

std::complex<double> decode_value(double a, double b, SParamFormat fmt) {
    switch (fmt) {
    case SParamFormat::RI:
        return {a, b};
    case SParamFormat::MA:
        return std::polar(a, b * std::numbers::pi / 180.0);
    case SParamFormat::DB:
        return std::polar(std::pow(10.0, a / 20.0),
                          b * std::numbers::pi / 180.0);
    }
    return {};
}

// Touchstone v1 data ordering: 1-port S11; 2-port column-major
// (S11 S21 S12 S22); >= 3 ports row-major.
std::pair<int, int> matrix_position(int pair_index, int n_ports) {
    if (n_ports <= 2)
        return {pair_index % n_ports, pair_index / n_ports};
    return {pair_index / n_ports, pair_index % n_ports};
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void encode_value(std::complex<double> v, SParamFormat fmt, double& a,
                  double& b) {
    switch (fmt) {
    case SParamFormat::RI:
        a = v.real();
        b = v.imag();
        return;
    case SParamFormat::MA:
        a = std::abs(v);
        b = a == 0.0 ? 0.0 : std::arg(v) * 180.0 / std::numbers::pi;
        return;
    case SParamFormat::DB: {
        const double mag = std::abs(v);
        // -400 dB stands in for an exact zero (1e-20 after decode).
        a = mag == 0.0 ? -400.0 : 20.0 * std::log10(mag);
        b = mag == 0.0 ? 0.0 : std::arg(v) * 180.0 / std::numbers::pi;
        return;
    }
    }
}

} // namespace

void Network::validate() const {
    if (n_ports <= 0)
        throw validation_error("network port count must be positive");
    if (frequencies_hz.empty())
        throw validation_error("network has no frequency points");
    if (frequencies_hz.size() != s.size())
        throw validation_error("frequency and matrix counts differ");
    if (!(z0_ohm > 0.0))
        throw validation_error("reference impedance must be positive");
    for (std::size_t i = 0; i < frequencies_hz.size(); ++i) {
        if (!(frequencies_hz[i] > 0.0))
            throw validation_error("frequencies must be positive");
        if (i > 0 && frequencies_hz[i] <= frequencies_hz[i - 1])
            throw validation_error("frequencies must be strictly increasing");
        if (s[i].rows() != n_ports || s[i].cols() != n_ports)
            throw validation_error("scattering matrix size does not match "
                                   "port count");
        if (!s[i].allFinite())
            throw validation_error("scattering matrix has non-finite entries");
    }
}

bool Network::passive() const {
    for (const Eigen::MatrixXcd& m : s) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        if (svd.singularValues().size() > 0 &&
            svd.singularValues()(0) > 1.0 + 1e-9)
            return false;
    }
    return true;
}

Network parse_touchstone(std::istream& in, std::optional<int> n_ports_hint) {
    std::optional<OptionLine> opt;
    std::vector<DataLine> data;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        if (auto bang = raw.find('!'); bang != std::string::npos)
            raw.erase(bang);
        std::size_t start = raw.find_first_not_of(" \t");
        if (start == std::string::npos)
            continue;
        if (raw[start] == '[')
            throw validation_error(
                "Touchstone v2 keyword blocks are not supported (line " +
                std::to_string(line_no) + ")");
        if (raw[start] == '#') {
            if (opt)
                throw parse_error("duplicate option line", line_no);
            opt = parse_option_line(raw.substr(start), line_no);
            continue;
        }

        DataLine dl;
        dl.line_no = line_no;
        std::istringstream ss(raw.substr(start));
        std::string tok;
        while (ss >> tok) {
            double v;
            if (!parse_double(tok, v))
                throw parse_error("invalid numeric value '" + tok + "'",
                                  line_no);
            dl.values.push_back(v);
        }
        data.push_back(std::move(dl));
    }

    if (!opt)
        throw parse_error("missing option line ('#' line)",
                          data.empty() ? 0 : data.front().line_no);
    if (data.empty())
        throw parse_error("no network data found", line_no);

    const int n_ports =
        n_ports_hint && *n_ports_hint > 0 ? *n_ports_hint : infer_n_ports(data);

    std::vector<std::pair<int, std::vector<double>>> blocks;
    int bad_line = 0;
    if (!segment_blocks(data, n_ports, &blocks, &bad_line)) {
        // A 2-port file whose trailing lines carry five values apiece is
        // the classic noise-parameter section.
        if (n_ports == 2) {
            for (const DataLine& dl : data)
                if (dl.values.size() == 5)
                    throw validation_error(
                        "noise-parameter sections are not supported (line " +
                        std::to_string(dl.line_no) + ")");
        }
        throw parse_error("inconsistent value count per frequency block; "
                          "expected " +
                              std::to_string(1 + 2 * n_ports * n_ports) +
                              " values per block for " +
                              std::to_string(n_ports) + " ports",
                          bad_line);
    }

    Network net;
    net.n_ports = n_ports;
    net.z0_ohm = opt->z0;
    for (const auto& [blk_line, values] : blocks) {
        const double f = values[0] * opt->freq_scale;
        if (!(f > 0.0))
            throw parse_error("frequency must be positive", blk_line);
        if (!net.frequencies_hz.empty() && f <= net.frequencies_hz.back())
            throw parse_error("frequencies must be strictly increasing",
                              blk_line);
        Eigen::MatrixXcd m(n_ports, n_ports);
        for (int p = 0; p < n_ports * n_ports; ++p) {
            auto [row, col] = matrix_position(p, n_ports);
            m(row, col) =
                decode_value(values[1 + 2 * p], values[2 + 2 * p], opt->format);
        }
        net.frequencies_hz.push_back(f);
        net.s.push_back(std::move(m));
    }
    net.validate();
    return net;
}

Network parse_touchstone(const std::string& text,
                         std::optional<int> n_ports_hint) {
    std::istringstream ss(text);
    return parse_touchstone(ss, n_ports_hint);
}

Network load_touchstone(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open Touchstone file: " + path.string());

    std::optional<int> hint;
    std::string ext = upper(path.extension().string()); // ".S8P"
    if (ext.size() > 3 && ext.front() == '.' && ext[1] == 'S' &&
        ext.back() == 'P') {
        int n = 0;
        auto digits = ext.substr(2, ext.size() - 3);
        auto [ptr, ec] =
            std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && n > 0)
            hint = n;
    }
    try {
        return parse_touchstone(in, hint);
    } catch (const parse_error& e) {
        throw parse_error(path.string() + ": " + e.what());
    }
}

void write_touchstone(const Network& net, SParamFormat format,
                      std::ostream& out) {
    net.validate();
    const char* fmt_name = format == SParamFormat::RI   ? "RI"
                           : format == SParamFormat::MA ? "MA"
                                                        : "DB";
    out << "# HZ S " << fmt_name << " R " << format_double(net.z0_ohm) << "\n";

    const int n = net.n_ports;
    for (std::size_t fi = 0; fi < net.frequencies_hz.size(); ++fi) {
        out << format_double(net.frequencies_hz[fi]);
        int pairs_on_line = 0;
        for (int p = 0; p < n * n; ++p) {
            auto [row, col] = matrix_position(p, n);
            double a, b;
            encode_value(net.s[fi](row, col), format, a, b);
            // v1.1 layout: for >= 3 ports each matrix row starts a new
            // line and long rows wrap after four pairs.
            const bool row_start = n >= 3 && p % n == 0 && p > 0;
            if (row_start || (pairs_on_line == 4 && n >= 3)) {
                out << "\n";
                pairs_on_line = 0;
            } else {
                out << " ";
            }
            out << format_double(a) << " " << format_double(b);
            ++pairs_on_line;
        }
        out << "\n";
    }
}

std::string write_touchstone(const Network& net, SParamFormat format) {
    std::ostringstream ss;
    write_touchstone(net, format, ss);
    return ss.str();
}

void save_touchstone(const Network& net, SParamFormat format,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot write Touchstone file: " + path.string());
    write_touchstone(net, format, out);
    out << std::flush;
    if (!out)
        throw io_error("write failed: " + path.string());
}

} // namespace cluskit
