/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mgrisk {

enum class Phase : std::uint8_t { a = 0, b = 1, c = 2 };

inline constexpr std::array<Phase, 3> kAllPhases{Phase::a, Phase::b, Phase::c};

constexpr int index_of(Phase p) { return static_cast<int>(p); }

char to_char(Phase p);
std::optional<Phase> phase_from_string(std::string_view s);

/// Subset of {a, b, c}. Iteration is always in canonical a < b < c order.
class PhaseSet {
 public:
    constexpr PhaseSet() = default;
    PhaseSet(std::initializer_list<Phase> phases) {
        for (Phase p : phases) insert(p);
    }

    static constexpr PhaseSet from_mask(std::uint8_t m) {
        PhaseSet s;
        s.mask_ = m & 0x7;
        return s;
    }
    static constexpr PhaseSet all() { return from_mask(0x7); }

    constexpr void insert(Phase p) { mask_ |= bit(p); }
    constexpr bool contains(Phase p) const { return (mask_ & bit(p)) != 0; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr std::uint8_t mask() const { return mask_; }
    constexpr int size() const {
        return ((mask_ >> 0) & 1) + ((mask_ >> 1) & 1) + ((mask_ >> 2) & 1);
    }
    constexpr bool is_subset_of(PhaseSet other) const { return (mask_ & ~other.mask_) == 0; }
    constexpr PhaseSet operator&(PhaseSet o) const { return from_mask(mask_ & o.mask_); }
    constexpr PhaseSet operator|(PhaseSet o) const { return from_mask(mask_ | o.mask_); }
    constexpr bool operator==(const PhaseSet&) const = default;

    /// Position of `p` within this set (0-based, canonical order); -1 if absent.
    constexpr int position(Phase p) const {
        if (!contains(p)) return -1;
        int pos = 0;
        for (int i = 0; i < index_of(p); ++i) pos += (mask_ >> i) & 1;
        return pos;
    }

    std::vector<Phase> phases() const;
    std::string to_string() const;  // e.g. "abc", "ac"

 private:
    static constexpr std::uint8_t bit(Phase p) { return static_cast<std::uint8_t>(1u << index_of(p)); }
    std::uint8_t mask_ = 0;
};

/// Per-phase scalar quantity (kW, kvar, ...). Phases not in `phases` are zero.
struct PhaseValues {
    PhaseSet phases;
    std::array<double, 3> value{0.0, 0.0, 0.0};

    double operator[](Phase p) const { return value[index_of(p)]; }
    void set(Phase p, double v) {
        phases.insert(p);
        value[index_of(p)] = v;
    }
    void add(Phase p, double v) {
        phases.insert(p);
        value[index_of(p)] += v;
    }
    double total() const { return value[0] + value[1] + value[2]; }
    bool operator==(const PhaseValues&) const = default;
};

}  // namespace mgrisk
