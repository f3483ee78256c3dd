#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "ostra/qexact.hpp"

namespace ostra {

class Dfao;

enum class SystemKind { fibonacci, pell, ostrowski };

/// Digit string, most significant first.  The canonical representation
/// of zero is the single digit 0; otherwise there is no leading zero.
struct Representation {
    std::vector<int> digits;

    std::string str() const;
    static Representation parse(const std::string& text);
    bool operator==(const Representation&) const = default;
};

/// A positional numeration system: the Zeckendorf basis F_{i+2}, the
/// Pell basis P_{i+1}, or the convergent denominators q_i of a purely
/// periodic continued fraction.  The basis cache grows on demand and
/// may be extended under concurrent reads.
class NumerationSystem {
public:
    static NumerationSystem fibonacci();
    static NumerationSystem pell();
    static NumerationSystem ostrowski(std::vector<int> period);

    /// Serialized forms: "fib", "pell", "ost:[d1,...,dm]".
    static NumerationSystem parse(const std::string& text);
    std::string str() const;

    SystemKind kind() const { return kind_; }
    const std::vector<int>& period() const { return period_; }

    /// Largest digit value that can appear in a valid string.
    int max_digit() const;

    Int basis(size_t i) const;

    Representation encode(const Int& n) const;
    Int decode(const Representation& r, bool strict = true) const;
    Int decode_digits(std::span<const int> digits) const;

    /// True iff the digits (ignoring leading zeros) satisfy the
    /// system's rules.
    bool is_valid(std::span<const int> digits) const;

    /// Minimal DFA over the digit alphabet accepting exactly the valid
    /// strings, with leading zeros allowed.  Canonically numbered; its
    /// states are the base states B0, B1, ...
    Dfao validity_dfa() const;

    bool operator==(const NumerationSystem& o) const {
        return kind_ == o.kind_ && period_ == o.period_;
    }

private:
    NumerationSystem(SystemKind kind, std::vector<int> period);

    /// Inclusive upper bound for the digit at position i (position 0 is
    /// least significant).
    int digit_bound(size_t i) const;
    /// True if a digit equal to digit_bound(i) at position i >= 1
    /// forces the digit at position i-1 to be zero.
    bool bound_forces_zero(size_t i) const;

    SystemKind kind_;
    std::vector<int> period_;

    struct Cache {
        std::mutex mutex;
        std::vector<Int> basis;
    };
    std::shared_ptr<Cache> cache_;
};

}  // namespace ostra
