#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "asqlab/errors.hpp"
#include "asqlab/scalar.hpp"

namespace asqlab {

// Finitely supported vector with 1-based coordinate indices, stored sparsely
// as (index, value) pairs sorted by index. Explicit zeros are never stored.
template <class S>
class CoordVector {
  public:
    using Entry = std::pair<std::int64_t, S>;

    CoordVector() = default;

    static CoordVector unit(std::int64_t index, S value = scalar_traits<S>::from_int(1)) {
        CoordVector v;
        v.set(index, value);
        return v;
    }

    void set(std::int64_t index, const S& value) {
        if (index < 1) throw InputError("vector: index " + std::to_string(index) + " < 1");
        auto it = lower_bound(index);
        if (it != entries_.end() && it->first == index) {
            if (value == S{}) {
                entries_.erase(it);
            } else {
                it->second = value;
            }
        } else if (!(value == S{})) {
            entries_.insert(it, {index, value});
        }
    }

    void add(std::int64_t index, const S& value) {
        auto it = lower_bound(index);
        if (it != entries_.end() && it->first == index) {
            S s = it->second + value;
            if (s == S{}) {
                entries_.erase(it);
            } else {
                it->second = s;
            }
        } else {
            set(index, value);
        }
    }

    S get(std::int64_t index) const {
        auto it = lower_bound(index);
        if (it != entries_.end() && it->first == index) return it->second;
        return S{};
    }

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    std::int64_t max_support() const { return entries_.empty() ? 0 : entries_.back().first; }

    CoordVector scaled(const S& t) const {
        CoordVector r;
        if (t == S{}) return r;
        r.entries_.reserve(entries_.size());
        for (const auto& [i, v] : entries_) r.entries_.push_back({i, v * t});
        return r;
    }

    friend CoordVector operator+(const CoordVector& a, const CoordVector& b) {
        CoordVector r;
        r.entries_.reserve(a.entries_.size() + b.entries_.size());
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < a.entries_.size() || j < b.entries_.size()) {
            if (j == b.entries_.size() ||
                (i < a.entries_.size() && a.entries_[i].first < b.entries_[j].first)) {
                r.entries_.push_back(a.entries_[i++]);
            } else if (i == a.entries_.size() || b.entries_[j].first < a.entries_[i].first) {
                r.entries_.push_back(b.entries_[j++]);
            } else {
                S s = a.entries_[i].second + b.entries_[j].second;
                if (!(s == S{})) r.entries_.push_back({a.entries_[i].first, s});
                ++i;
                ++j;
            }
        }
        return r;
    }
    friend CoordVector operator-(const CoordVector& a, const CoordVector& b) {
        return a + b.scaled(scalar_traits<S>::from_int(-1));
    }

    friend bool operator==(const CoordVector& a, const CoordVector& b) {
        return a.entries_ == b.entries_;
    }

    // Coordinate projection onto indices <= cutoff.
    CoordVector prefix(std::int64_t cutoff) const {
        CoordVector r;
        for (const auto& e : entries_) {
            if (e.first > cutoff) break;
            r.entries_.push_back(e);
        }
        return r;
    }

    S linf() const {
        S m{};
        for (const auto& [i, v] : entries_) m = std::max(m, scalar_traits<S>::abs(v));
        return m;
    }

    std::string to_csv() const {
        std::ostringstream out;
        out << "index,value\n";
        for (const auto& [i, v] : entries_) out << i << "," << scalar_traits<S>::str(v) << "\n";
        return out.str();
    }

    // Lines "index,value"; an optional "index,value" header is skipped.
    // Values are decimal or p/q; repeated indices are rejected.
    static CoordVector from_csv(const std::string& text) {
        CoordVector v;
        std::istringstream in(text);
        std::string line;
        std::int64_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty()) continue;
            if (lineno == 1 && line == "index,value") continue;
            auto comma = line.find(',');
            if (comma == std::string::npos)
                throw InputError("vector csv: missing comma on line " + std::to_string(lineno));
            std::int64_t idx = 0;
            try {
                std::size_t pos = 0;
                idx = std::stoll(line.substr(0, comma), &pos);
                if (pos != comma) throw InputError("bad index");
            } catch (const std::exception&) {
                throw InputError("vector csv: bad index on line " + std::to_string(lineno));
            }
            if (!(v.get(idx) == S{}))
                throw InputError("vector csv: repeated index " + std::to_string(idx));
            v.set(idx, scalar_traits<S>::parse(line.substr(comma + 1)));
        }
        return v;
    }

  private:
    typename std::vector<Entry>::const_iterator lower_bound(std::int64_t index) const {
        return std::lower_bound(entries_.begin(), entries_.end(), index,
                                [](const Entry& e, std::int64_t i) { return e.first < i; });
    }
    typename std::vector<Entry>::iterator lower_bound(std::int64_t index) {
        return std::lower_bound(entries_.begin(), entries_.end(), index,
                                [](const Entry& e, std::int64_t i) { return e.first < i; });
    }

    std::vector<Entry> entries_;
};

} // namespace asqlab
