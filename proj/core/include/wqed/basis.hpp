#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wqed/sparse.hpp"

namespace wqed {

/// Basis of a two-level system plus a bosonic chain, truncated at a total
/// excitation count (qubit counts as one excitation). States are encoded as
/// the qubit bit plus the sorted list of occupied sites with repetition.
class CappedBasis {
public:
    static constexpr int kMaxExcitations = 4;

    CappedBasis(int n_sites, int cutoff, bool with_qubit = true);

    int n_sites() const { return n_sites_; }
    int cutoff() const { return cutoff_; }
    std::size_t size() const { return states_.size(); }

    struct State {
        bool qubit = false;
        int n_photons = 0;
        std::array<std::int16_t, kMaxExcitations> sites{};  // sorted, first n_photons valid
        int excitations() const { return n_photons + (qubit ? 1 : 0); }
        int parity() const { return excitations() & 1; }
    };

    const State& state(std::size_t i) const { return states_[i]; }
    /// -1 when the state is outside the truncated space.
    long index(const State& s) const;

    int occupation(const State& s, int site) const;

    /// a_site^dagger |s> -> (s', sqrt(n+1)); returns false when out of space.
    bool create(const State& s, int site, State& out, double& amp) const;
    /// a_site |s> -> (s', sqrt(n)); returns false when the site is empty.
    bool annihilate(const State& s, int site, State& out, double& amp) const;

    static State flip_qubit(const State& s);

private:
    int n_sites_;
    int cutoff_;
    bool with_qubit_;
    std::vector<State> states_;
    std::unordered_map<std::uint64_t, std::size_t> lookup_;

    static std::uint64_t encode(const State& s);
};

}  // namespace wqed
