#include "ostra/numeration.hpp"

#include <algorithm>
#include <sstream>

#include "ostra/automata.hpp"

namespace ostra {

std::string Representation::str() const {
    std::string s;
    for (int d : digits) {
        if (d < 0 || d > 9) throw std::domain_error("representation: digit > 9 has no character form");
        s += char('0' + d);
    }
    return s;
}

Representation Representation::parse(const std::string& text) {
    Representation r;
    for (char c : text) {
        if (c < '0' || c > '9') throw std::invalid_argument("representation: bad digit character");
        r.digits.push_back(c - '0');
    }
    if (r.digits.empty()) throw std::invalid_argument("representation: empty string");
    return r;
}

NumerationSystem::NumerationSystem(SystemKind kind, std::vector<int> period)
    : kind_(kind), period_(std::move(period)), cache_(std::make_shared<Cache>()) {}

NumerationSystem NumerationSystem::fibonacci() {
    return NumerationSystem(SystemKind::fibonacci, {});
}

NumerationSystem NumerationSystem::pell() {
    return NumerationSystem(SystemKind::pell, {});
}

NumerationSystem NumerationSystem::ostrowski(std::vector<int> period) {
    if (period.empty()) throw std::invalid_argument("ostrowski: empty period");
    for (int d : period)
        if (d < 1) throw std::invalid_argument("ostrowski: period entries must be >= 1");
    return NumerationSystem(SystemKind::ostrowski, std::move(period));
}

NumerationSystem NumerationSystem::parse(const std::string& text) {
    if (text == "fib") return fibonacci();
    if (text == "pell") return pell();
    if (text.rfind("ost:[", 0) == 0 && text.back() == ']') {
        std::vector<int> period;
        std::istringstream in(text.substr(5, text.size() - 6));
        std::string part;
        while (std::getline(in, part, ',')) period.push_back(std::stoi(part));
        return ostrowski(std::move(period));
    }
    throw std::invalid_argument("unknown numeration system: " + text);
}

std::string NumerationSystem::str() const {
    switch (kind_) {
        case SystemKind::fibonacci: return "fib";
        case SystemKind::pell: return "pell";
        case SystemKind::ostrowski: {
            std::ostringstream out;
            out << "ost:[";
            for (size_t i = 0; i < period_.size(); ++i) {
                if (i) out << ",";
                out << period_[i];
            }
            out << "]";
            return out.str();
        }
    }
    return {};
}

int NumerationSystem::max_digit() const {
    switch (kind_) {
        case SystemKind::fibonacci: return 1;
        case SystemKind::pell: return 2;
        case SystemKind::ostrowski:
            return *std::max_element(period_.begin(), period_.end());
    }
    return 0;
}

int NumerationSystem::digit_bound(size_t i) const {
    switch (kind_) {
        case SystemKind::fibonacci: return 1;
        case SystemKind::pell: return i == 0 ? 1 : 2;
        case SystemKind::ostrowski:
            // Rule 1: a_0 < d_1.  Rule 2: a_i <= d_{i+1} for i >= 1.
            if (i == 0) return period_[0] - 1;
            return period_[i % period_.size()];
    }
    return 0;
}

bool NumerationSystem::bound_forces_zero(size_t i) const {
    // Rule 3 (and its Zeckendorf/Pell analogues): a digit equal to its
    // inclusive bound at position i >= 1 forces a zero below it.
    return i >= 1;
}

Int NumerationSystem::basis(size_t i) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto& u = cache_->basis;
    while (u.size() <= i) {
        size_t n = u.size();
        switch (kind_) {
            case SystemKind::fibonacci:
                u.push_back(n == 0 ? Int(1) : n == 1 ? Int(2) : u[n - 1] + u[n - 2]);
                break;
            case SystemKind::pell:
                u.push_back(n == 0 ? Int(1) : n == 1 ? Int(2) : 2 * u[n - 1] + u[n - 2]);
                break;
            case SystemKind::ostrowski: {
                // q_{-2} = 1, q_{-1} = 0, q_n = d_n q_{n-1} + q_{n-2};
                // d_n cycles through the period starting at d_1.
                if (n == 0) u.push_back(1);
                else {
                    Int prev2 = (n == 1) ? Int(0) : u[n - 2];
                    int d = period_[(n - 1) % period_.size()];
                    u.push_back(d * u[n - 1] + prev2);
                }
                break;
            }
        }
    }
    return u[i];
}

Representation NumerationSystem::encode(const Int& n) const {
    if (n < 0) throw std::domain_error("encode: negative value");
    if (n == 0) return Representation{{0}};
    size_t top = 0;
    while (basis(top + 1) <= n) ++top;
    Representation r;
    Int rest = n;
    for (size_t i = top + 1; i-- > 0;) {
        Int digit = rest / basis(i);
        r.digits.push_back((int)digit.get_si());
        rest -= digit * basis(i);
    }
    return r;
}

Int NumerationSystem::decode_digits(std::span<const int> digits) const {
    Int n = 0;
    size_t len = digits.size();
    for (size_t j = 0; j < len; ++j) {
        if (digits[j] < 0) throw std::domain_error("decode: negative digit");
        if (digits[j] != 0) n += digits[j] * basis(len - 1 - j);
    }
    return n;
}

Int NumerationSystem::decode(const Representation& r, bool strict) const {
    if (strict && !is_valid(r.digits))
        throw std::domain_error("decode: invalid representation for " + str());
    return decode_digits(r.digits);
}

bool NumerationSystem::is_valid(std::span<const int> digits) const {
    size_t len = digits.size();
    size_t lead = 0;
    while (lead < len && digits[lead] == 0) ++lead;
    for (size_t j = lead; j < len; ++j) {
        size_t pos = len - 1 - j;
        int a = digits[j];
        if (a < 0 || a > digit_bound(pos)) return false;
        if (pos >= 1 && a == digit_bound(pos) && bound_forces_zero(pos) &&
            digits[j + 1] != 0)
            return false;
    }
    return true;
}

Dfao NumerationSystem::validity_dfa() const {
    // Least-significant-first checker, where each position is known
    // exactly; the published automaton reads most-significant-first, so
    // reverse, determinize and minimize.
    int maxd = max_digit();
    size_t m = (kind_ == SystemKind::ostrowski) ? period_.size() : 1;

    // States: 0 = start; 1 + 2*p + z = (phase p, previous digit zero z).
    auto state_of = [&](size_t phase, bool prev_zero) {
        return 1 + 2 * (int)(phase % m) + (prev_zero ? 1 : 0);
    };
    int nstates = 1 + 2 * (int)m;

    Dfa lsd;
    lsd.alphabet = Alphabet::uniform(1, maxd + 1);
    lsd.start = 0;
    lsd.output.assign(nstates, 1);  // every prefix of a valid string is valid
    lsd.next.assign(nstates, std::vector<int>(maxd + 1, kDead));
    for (int a = 0; a <= maxd; ++a) {
        if (a <= digit_bound(0)) lsd.next[0][a] = state_of(1, a == 0);
        for (size_t p = 0; p < m; ++p) {
            // Reading position i >= 1 with i ≡ p (mod m).
            size_t pos = (p == 0) ? m : p;
            int bound = digit_bound(pos);
            if (a > bound) continue;
            for (int z = 0; z <= 1; ++z) {
                if (a == bound && bound_forces_zero(pos) && !z) continue;
                lsd.next[state_of(p, z)][a] = state_of(p + 1, a == 0);
            }
        }
    }

    Nfa rev;
    rev.alphabet = lsd.alphabet;
    for (int s = 0; s < nstates; ++s) rev.add_state();
    for (int s = 0; s < nstates; ++s) {
        rev.starts.push_back(s);  // all lsd states accept
        for (int a = 0; a <= maxd; ++a)
            if (lsd.next[s][a] != kDead) rev.add_edge(lsd.next[s][a], a, s);
    }
    rev.accepting[0] = 1;
    return minimize_dfa(determinize(rev));
}

}  // namespace ostra
