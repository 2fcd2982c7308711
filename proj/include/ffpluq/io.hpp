#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "ffpluq/matrix.hpp"

namespace ffpluq {

/// Text matrix format `.zpm`: header line `m n p`, then m lines of n
/// space-separated canonical residues. Round-trips bit-exactly.
inline void write_zpm(std::ostream& os, const MatView& a) {
    os << a.rows << ' ' << a.cols << ' ' << a.field->p << '\n';
    for (usize i = 0; i < a.rows; ++i) {
        const elem* r = a.row(i);
        for (usize j = 0; j < a.cols; ++j) {
            if (j) os << ' ';
            os << r[j];
        }
        os << '\n';
    }
}

inline void write_zpm(const std::string& path, const MatView& a) {
    std::ofstream f(path);
    if (!f) throw BadFormat("cannot open " + path + " for writing");
    write_zpm(f, a);
}

inline Mat read_zpm(std::istream& is) {
    usize m = 0, n = 0;
    u64 p = 0;
    if (!(is >> m >> n >> p)) throw BadFormat("zpm: bad header, expected `m n p`");
    PrimeField F(p);
    Mat a(m, n, F);
    for (usize i = 0; i < m; ++i)
        for (usize j = 0; j < n; ++j) {
            u64 v;
            if (!(is >> v)) throw BadFormat("zpm: truncated data");
            if (v >= p) throw BadFormat("zpm: entry not a canonical residue");
            a.at(i, j) = elem(v);
        }
    return a;
}

inline Mat read_zpm(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw BadFormat("cannot open " + path);
    return read_zpm(f);
}

} // namespace ffpluq
