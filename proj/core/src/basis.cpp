#include "wqed/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wqed {

std::uint64_t CappedBasis::encode(const State& s) {
    // 14 bits per occupied site (offset by 1), 4 slots, plus the qubit bit.
    std::uint64_t key = s.qubit ? 1u : 0u;
    for (int i = 0; i < s.n_photons; ++i)
        key |= (static_cast<std::uint64_t>(s.sites[i]) + 1) << (1 + 14 * i);
    return key;
}

CappedBasis::CappedBasis(int n_sites, int cutoff, bool with_qubit)
    : n_sites_(n_sites), cutoff_(cutoff), with_qubit_(with_qubit) {
    if (cutoff < 0 || cutoff > kMaxExcitations)
        throw std::invalid_argument("CappedBasis: cutoff must be in [0, 4]");
    if (n_sites < 1 || n_sites > (1 << 14) - 2)
        throw std::invalid_argument("CappedBasis: bad site count");

    // enumerate non-decreasing site tuples per photon count
    for (int q = 0; q < (with_qubit ? 2 : 1); ++q) {
        int max_ph = cutoff - q;
        for (int m = 0; m <= max_ph; ++m) {
            State s;
            s.qubit = q != 0;
            s.n_photons = m;
            std::vector<int> idx(m, 0);
            while (true) {
                for (int i = 0; i < m; ++i)
                    s.sites[i] = static_cast<std::int16_t>(idx[i]);
                lookup_.emplace(encode(s), states_.size());
                states_.push_back(s);
                if (m == 0) break;
                int pos = m - 1;
                while (pos >= 0 && idx[pos] == n_sites - 1) --pos;
                if (pos < 0) break;
                int v = idx[pos] + 1;
                for (int i = pos; i < m; ++i) idx[i] = v;
            }
        }
    }
}

long CappedBasis::index(const State& s) const {
    auto it = lookup_.find(encode(s));
    return it == lookup_.end() ? -1 : static_cast<long>(it->second);
}

int CappedBasis::occupation(const State& s, int site) const {
    int n = 0;
    for (int i = 0; i < s.n_photons; ++i)
        if (s.sites[i] == site) ++n;
    return n;
}

bool CappedBasis::create(const State& s, int site, State& out, double& amp) const {
    if (s.excitations() + 1 > cutoff_) return false;
    out = s;
    int pos = 0;
    while (pos < s.n_photons && s.sites[pos] < site) ++pos;
    for (int i = s.n_photons; i > pos; --i) out.sites[i] = out.sites[i - 1];
    out.sites[pos] = static_cast<std::int16_t>(site);
    ++out.n_photons;
    amp = std::sqrt(static_cast<double>(occupation(s, site) + 1));
    return true;
}

bool CappedBasis::annihilate(const State& s, int site, State& out, double& amp) const {
    int n = occupation(s, site);
    if (n == 0) return false;
    out = s;
    int pos = 0;
    while (out.sites[pos] != site) ++pos;
    for (int i = pos; i + 1 < s.n_photons; ++i) out.sites[i] = out.sites[i + 1];
    --out.n_photons;
    amp = std::sqrt(static_cast<double>(n));
    return true;
}

CappedBasis::State CappedBasis::flip_qubit(const State& s) {
    State out = s;
    out.qubit = !s.qubit;
    return out;
}

}  // namespace wqed
