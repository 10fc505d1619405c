#pragma once

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mertens/common.hpp"
#include "mertens/errors.hpp"
#include "mertens/sieve.hpp"
#include "mertens/zeros.hpp"

namespace mertens::io {

// All file output is atomic: write to <path>.tmp.<pid>, then rename. An
// interrupted run never leaves a partial file at the target path.
inline void atomic_write(const std::string& path,
                         const std::function<void(std::ostream&)>& writer) {
    namespace fs = std::filesystem;
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp);
            writer(out);
            out.flush();
            if (!out) throw std::runtime_error("atomic_write: write failed on " + tmp);
        }
        fs::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

// --- zero files: one ordinate per line, '#' comments, strictly increasing ---

inline void export_zero_ordinates(const zeta::ZeroTable& table, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << "# zeta zero ordinates, height " << fmt_g15(table.height_T)
            << (table.complete ? ", complete\n" : "\n");
        for (const auto& z : table.zeros) out << fmt_g15(z.gamma) << "\n";
    });
}

namespace detail {
// Comment lines may declare the table's height ("... height <T> ..."); the
// completeness flag is always recomputed from the counting formula at that
// height (falling back to the last ordinate when no height is declared).
inline bool parse_height_comment(const std::string& line, double& height) {
    const auto pos = line.find("height");
    if (pos == std::string::npos) return false;
    char* end = nullptr;
    const double v = std::strtod(line.c_str() + pos + 6, &end);
    if (end == line.c_str() + pos + 6) return false;
    height = v;
    return true;
}
}  // namespace detail

inline zeta::ZeroTable import_zero_ordinates(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("import_zero_ordinates: cannot open " + path);
    zeta::ZeroTable table;
    std::string line;
    long line_no = 0;
    double prev = 0.0;
    double declared_height = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') {
            if (pos != std::string::npos) detail::parse_height_comment(line, declared_height);
            continue;
        }
        char* end = nullptr;
        const double g = std::strtod(line.c_str() + pos, &end);
        if (end == line.c_str() + pos) throw parse_error("import_zero_ordinates: not a number", line_no);
        if (!(g > prev)) throw parse_error("import_zero_ordinates: ordinates must increase", line_no);
        prev = g;
        table.zeros.push_back({g, {0.0, 0.0}, 1e-9});
    }
    table.height_T = declared_height > prev ? declared_height : prev;
    table.complete =
        !table.zeros.empty() &&
        static_cast<long long>(table.zeros.size()) ==
            std::llround(zeta::counting_main_term(table.height_T));
    return table;
}

// --- residue tables: CSV gamma,re_inv_zp,im_inv_zp,err -----------------------

inline void export_residue_table(const zeta::ZeroTable& table, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << "# residue table, height " << fmt_g15(table.height_T) << "\n";
        out << "gamma,re_inv_zp,im_inv_zp,err\n";
        for (const auto& z : table.zeros)
            out << fmt_g15(z.gamma) << "," << fmt_g15(z.inv_zeta_prime.real()) << ","
                << fmt_g15(z.inv_zeta_prime.imag()) << "," << fmt_g15(z.err) << "\n";
    });
}

inline zeta::ZeroTable import_residue_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("import_residue_table: cannot open " + path);
    zeta::ZeroTable table;
    std::string line;
    long line_no = 0;
    double prev = 0.0;
    double declared_height = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            if (!line.empty()) detail::parse_height_comment(line, declared_height);
            continue;
        }
        if (line.rfind("gamma,", 0) == 0) continue;
        std::istringstream ss(line);
        std::string f0, f1, f2, f3;
        if (!std::getline(ss, f0, ',') || !std::getline(ss, f1, ',') ||
            !std::getline(ss, f2, ',') || !std::getline(ss, f3, ','))
            throw parse_error("import_residue_table: expected 4 fields", line_no);
        zeta::ZetaZero z;
        z.gamma = std::stod(f0);
        z.inv_zeta_prime = {std::stod(f1), std::stod(f2)};
        z.err = std::stod(f3);
        if (!(z.gamma > prev)) throw parse_error("import_residue_table: ordinates must increase", line_no);
        prev = z.gamma;
        table.zeros.push_back(z);
    }
    table.height_T = declared_height > prev ? declared_height : prev;
    table.has_residues = true;
    table.complete =
        !table.zeros.empty() &&
        static_cast<long long>(table.zeros.size()) ==
            std::llround(zeta::counting_main_term(table.height_T));
    return table;
}

// --- Mertens checkpoints: CSV x,M,m,Q,R; append-only so runs are resumable ---

inline void write_checkpoint_header(std::ostream& out) { out << "x,M,m,Q,R\n"; }

inline void write_checkpoint_row(std::ostream& out, const sieve::MertensCheckpoint& cp) {
    out << cp.x << "," << cp.M << "," << fmt_g15(cp.m) << "," << cp.Q << "," << fmt_g15(cp.R)
        << "\n";
}

inline std::vector<sieve::MertensCheckpoint> import_checkpoints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("import_checkpoints: cannot open " + path);
    std::vector<sieve::MertensCheckpoint> rows;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("x,", 0) == 0) continue;
        std::istringstream ss(line);
        std::string f0, f1, f2, f3, f4;
        if (!std::getline(ss, f0, ',') || !std::getline(ss, f1, ',') ||
            !std::getline(ss, f2, ',') || !std::getline(ss, f3, ',') || !std::getline(ss, f4, ','))
            throw parse_error("import_checkpoints: expected 5 fields", line_no);
        sieve::MertensCheckpoint cp;
        cp.x = std::stoull(f0);
        cp.M = std::stoll(f1);
        cp.m = std::stod(f2);
        cp.Q = std::stoull(f3);
        cp.R = std::stod(f4);
        rows.push_back(cp);
    }
    return rows;
}

// Log-spaced integer sample points, shared by the sieve and verify pipelines
// so checkpoint emission and lookup agree exactly.
inline std::vector<std::uint64_t> log_spaced_samples(double lo, double hi, int n) {
    if (!(lo >= 1.0) || !(hi >= lo) || n < 1)
        throw invalid_parameter("log_spaced_samples: need 1 <= lo <= hi, n >= 1");
    std::vector<std::uint64_t> xs;
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? la : la + (lb - la) * static_cast<double>(i) / (n - 1);
        xs.push_back(static_cast<std::uint64_t>(std::llround(std::exp(t))));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace mertens::io
