// Copyright 2026 The spinfan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinfan {

/// Indexing scheme for p logical pairs over 2p physical qubits.
/// Pair a (1-based) owns physical qubits a1 = 2a-1 and a2 = 2a.
struct PairLayout {
    int pairs = 0;

    explicit PairLayout(int p) : pairs(p) {
        if (p < 1) throw std::invalid_argument("PairLayout: need at least one pair");
    }

    int physical_count() const { return 2 * pairs; }
    int first(int a) const { check_pair(a); return 2 * a - 1; }
    int second(int a) const { check_pair(a); return 2 * a; }
    int pair_of(int physical) const {
        if (physical < 1 || physical > physical_count())
            throw std::out_of_range("PairLayout: physical qubit out of range");
        return (physical + 1) / 2;
    }

private:
    void check_pair(int a) const {
        if (a < 1 || a > pairs) throw std::out_of_range("PairLayout: pair index out of range");
    }
};

/// Logical bit string x_1 ... x_p; leftmost character is pair 1.
class BitString {
public:
    explicit BitString(std::vector<int> bits) : bits_(std::move(bits)) { validate(); }

    explicit BitString(const std::string& text) {
        bits_.reserve(text.size());
        for (char c : text) {
            if (c != '0' && c != '1')
                throw std::invalid_argument("BitString: expected characters '0'/'1', got '" +
                                            std::string(1, c) + "'");
            bits_.push_back(c - '0');
        }
        validate();
    }

    /// All length-p strings in lexicographic order (index = binary value, bit 1 most significant).
    static BitString from_index(std::int64_t index, int p) {
        std::vector<int> bits(p);
        for (int i = 1; i <= p; ++i) bits[i - 1] = static_cast<int>((index >> (p - i)) & 1);
        return BitString(std::move(bits));
    }

    int size() const { return static_cast<int>(bits_.size()); }
    int bit(int pair) const { return bits_.at(pair - 1); }

    int weight() const {
        return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
    }

    /// Pair indices with x_a = 1 (the set C1).
    std::vector<int> ones() const { return where(1); }
    /// Pair indices with x_a = 0 (the set C0).
    std::vector<int> zeros() const { return where(0); }

    BitString with_bit(int pair, int value) const {
        std::vector<int> bits = bits_;
        bits.at(pair - 1) = value;
        return BitString(std::move(bits));
    }

    BitString concat(const BitString& other) const {
        std::vector<int> bits = bits_;
        bits.insert(bits.end(), other.bits_.begin(), other.bits_.end());
        return BitString(std::move(bits));
    }

    std::string str() const {
        std::string s;
        for (int b : bits_) s.push_back(static_cast<char>('0' + b));
        return s;
    }

    std::int64_t index() const {
        std::int64_t v = 0;
        for (int b : bits_) v = (v << 1) | b;
        return v;
    }

    bool operator==(const BitString& other) const { return bits_ == other.bits_; }

private:
    std::vector<int> where(int value) const {
        std::vector<int> out;
        for (int a = 1; a <= size(); ++a)
            if (bits_[a - 1] == value) out.push_back(a);
        return out;
    }

    void validate() const {
        if (bits_.empty()) throw std::invalid_argument("BitString: empty");
        for (int b : bits_)
            if (b != 0 && b != 1) throw std::invalid_argument("BitString: bits must be 0/1");
    }

    std::vector<int> bits_;
};

}  // namespace spinfan
