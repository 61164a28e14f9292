#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace sse {

/// Subset of the sensor index range {1, ..., p}. Indices are 1-based
/// throughout, matching the convention used in the rest of the library.
/// Backed by a 64-bit mask, which caps p at 64 sensors.
class SensorSet {
  public:
    static constexpr int max_sensors = 64;

    SensorSet() = default;

    SensorSet(std::initializer_list<int> sensors) {
        for (int i : sensors) { insert(i); }
    }

    static SensorSet full(int p) {
        check_index_range(p);
        SensorSet s;
        s.bits_ = (p == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << p) - 1);
        return s;
    }

    static SensorSet from_bits(std::uint64_t bits) {
        SensorSet s;
        s.bits_ = bits;
        return s;
    }

    void insert(int sensor) {
        check_index_range(sensor);
        bits_ |= std::uint64_t{1} << (sensor - 1);
    }

    void erase(int sensor) {
        check_index_range(sensor);
        bits_ &= ~(std::uint64_t{1} << (sensor - 1));
    }

    [[nodiscard]] bool contains(int sensor) const {
        if (sensor < 1 || sensor > max_sensors) { return false; }
        return (bits_ >> (sensor - 1)) & 1u;
    }

    [[nodiscard]] int size() const { return std::popcount(bits_); }
    [[nodiscard]] bool empty() const { return bits_ == 0; }
    [[nodiscard]] std::uint64_t bits() const { return bits_; }

    [[nodiscard]] bool subset_of(const SensorSet& other) const { return (bits_ & ~other.bits_) == 0; }

    [[nodiscard]] SensorSet complement(int p) const {
        SensorSet s = full(p);
        s.bits_ &= ~bits_;
        return s;
    }

    [[nodiscard]] SensorSet with(int sensor) const {
        SensorSet s = *this;
        s.insert(sensor);
        return s;
    }

    [[nodiscard]] SensorSet unite(const SensorSet& other) const { return from_bits(bits_ | other.bits_); }
    [[nodiscard]] SensorSet intersect(const SensorSet& other) const { return from_bits(bits_ & other.bits_); }

    /// Members in ascending order.
    [[nodiscard]] std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        std::uint64_t b = bits_;
        while (b != 0) {
            out.push_back(std::countr_zero(b) + 1);
            b &= b - 1;
        }
        return out;
    }

    friend bool operator==(const SensorSet&, const SensorSet&) = default;

  private:
    static void check_index_range(int i) {
        if (i < 1 || i > max_sensors) {
            throw std::invalid_argument("sensor index out of range 1..64: " + std::to_string(i));
        }
    }

    std::uint64_t bits_ = 0;
};

}  // namespace sse
