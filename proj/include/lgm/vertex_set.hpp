#ifndef LGM_VERTEX_SET_HPP_
#define LGM_VERTEX_SET_HPP_

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace lgm {

// Set of vertex ids 0..31 backed by a bitmask.  Vertices are dense small
// integers everywhere in the library; external names are mapped at the JSON
// boundary.
class VertexSet {
 public:
  constexpr VertexSet() = default;
  constexpr explicit VertexSet(std::uint32_t bits) : bits_(bits) {}

  static VertexSet of(std::initializer_list<int> vs) {
    VertexSet s;
    for (int v : vs) s.add(v);
    return s;
  }
  static constexpr VertexSet full(int d) {
    return VertexSet(d >= 32 ? ~0u : ((1u << d) - 1u));
  }
  static constexpr VertexSet single(int v) { return VertexSet(1u << v); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  int count() const { return std::popcount(bits_); }
  constexpr bool contains(int v) const { return (bits_ >> v) & 1u; }
  void add(int v) { bits_ |= (1u << v); }
  void remove(int v) { bits_ &= ~(1u << v); }
  int min() const { return std::countr_zero(bits_); }

  constexpr VertexSet operator|(VertexSet o) const { return VertexSet(bits_ | o.bits_); }
  constexpr VertexSet operator&(VertexSet o) const { return VertexSet(bits_ & o.bits_); }
  constexpr VertexSet minus(VertexSet o) const { return VertexSet(bits_ & ~o.bits_); }
  constexpr bool intersects(VertexSet o) const { return (bits_ & o.bits_) != 0; }
  constexpr bool subset_of(VertexSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool operator==(const VertexSet&) const = default;

  std::vector<int> to_vector() const {
    std::vector<int> out;
    for (std::uint32_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  // Iterates the member vertices in increasing order.
  class iterator {
   public:
    explicit iterator(std::uint32_t bits) : bits_(bits) {}
    int operator*() const { return std::countr_zero(bits_); }
    iterator& operator++() {
      bits_ &= bits_ - 1;
      return *this;
    }
    bool operator!=(const iterator& o) const { return bits_ != o.bits_; }

   private:
    std::uint32_t bits_;
  };
  iterator begin() const { return iterator(bits_); }
  iterator end() const { return iterator(0); }

  std::string str() const {
    std::string out = "{";
    bool first = true;
    for (int v : *this) {
      if (!first) out += ",";
      out += std::to_string(v + 1);  // 1-based in reports
      first = false;
    }
    return out + "}";
  }

 private:
  std::uint32_t bits_ = 0;
};

inline bool pairwise_disjoint(VertexSet a, VertexSet b, VertexSet c = VertexSet()) {
  return !a.intersects(b) && !a.intersects(c) && !b.intersects(c);
}

}  // namespace lgm

#endif  // LGM_VERTEX_SET_HPP_
