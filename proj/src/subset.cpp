#include "smallsum/subset.hpp"

#include <algorithm>

namespace smallsum {

namespace {

std::size_t word_count(std::uint32_t n) { return (n + 63) / 64; }

}  // namespace

SubsetMask::SubsetMask(GroupSpec group)
    : group_(std::move(group)), bits_(word_count(group_.order()), 0), count_(0) {}

SubsetMask SubsetMask::full(GroupSpec group) {
  SubsetMask m(std::move(group));
  std::fill(m.bits_.begin(), m.bits_.end(), ~std::uint64_t{0});
  m.clear_tail();
  m.count_ = m.group_.order();
  return m;
}

SubsetMask SubsetMask::from_indices(GroupSpec group, std::span<const std::uint32_t> indices) {
  SubsetMask m(std::move(group));
  for (auto i : indices) {
    if (i >= m.group_.order()) {
      throw Error("element index " + std::to_string(i) + " out of range for group " +
                  m.group_.to_string());
    }
    m.bits_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  m.recount();
  return m;
}

SubsetMask SubsetMask::from_indices(GroupSpec group, std::initializer_list<std::uint32_t> indices) {
  return from_indices(std::move(group), std::span<const std::uint32_t>(indices.begin(), indices.size()));
}

SubsetMask SubsetMask::from_elements(GroupSpec group, std::span<const Element> elements) {
  std::vector<std::uint32_t> idx;
  idx.reserve(elements.size());
  for (auto e : elements) idx.push_back(e.idx);
  return from_indices(std::move(group), idx);
}

SubsetMask SubsetMask::from_word(GroupSpec group, std::uint64_t word) {
  if (group.order() > 64) throw Error("from_word needs a group of order <= 64");
  SubsetMask m(std::move(group));
  m.bits_[0] = word;
  m.clear_tail();
  m.recount();
  return m;
}

SubsetMask SubsetMask::from_hex(GroupSpec group, std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  SubsetMask m(std::move(group));
  std::uint32_t bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
    const char c = *it;
    std::uint32_t v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw Error(std::string("bad hex digit '") + c + "'");
    for (std::uint32_t k = 0; k < 4; ++k) {
      if (!((v >> k) & 1u)) continue;
      const std::uint32_t i = bit + k;
      if (i >= m.group_.order()) throw Error("hex mask has bits beyond the group order");
      m.bits_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
  }
  m.recount();
  return m;
}

void SubsetMask::insert(Element x) {
  if (x.idx >= group_.order()) throw Error("element out of range");
  auto& w = bits_[x.idx >> 6];
  const std::uint64_t b = std::uint64_t{1} << (x.idx & 63);
  if (!(w & b)) {
    w |= b;
    ++count_;
  }
}

void SubsetMask::erase(Element x) {
  if (x.idx >= group_.order()) throw Error("element out of range");
  auto& w = bits_[x.idx >> 6];
  const std::uint64_t b = std::uint64_t{1} << (x.idx & 63);
  if (w & b) {
    w &= ~b;
    --count_;
  }
}

Element SubsetMask::min_element() const {
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    if (bits_[w]) return Element{static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits_[w]))};
  }
  throw Error("min_element of the empty set");
}

std::vector<Element> SubsetMask::elements() const {
  std::vector<Element> out;
  out.reserve(count_);
  for_each([&](Element e) { out.push_back(e); });
  return out;
}

std::vector<std::uint32_t> SubsetMask::indices() const {
  std::vector<std::uint32_t> out;
  out.reserve(count_);
  for_each([&](Element e) { out.push_back(e.idx); });
  return out;
}

std::uint64_t SubsetMask::word() const {
  if (group_.order() > 64) throw Error("word() needs a group of order <= 64");
  return bits_[0];
}

SubsetMask SubsetMask::complement() const {
  SubsetMask m(group_);
  for (std::size_t w = 0; w < bits_.size(); ++w) m.bits_[w] = ~bits_[w];
  m.clear_tail();
  m.count_ = group_.order() - count_;
  return m;
}

SubsetMask SubsetMask::translate(Element g) const {
  if (g.idx == 0) return *this;
  SubsetMask m(group_);
  if (const auto* table = group_.add_table()) {
    const std::uint32_t* row = table + static_cast<std::size_t>(g.idx) * group_.order();
    for_each([&](Element x) { m.bits_[row[x.idx] >> 6] |= std::uint64_t{1} << (row[x.idx] & 63); });
  } else {
    for_each([&](Element x) {
      const auto y = group_.add(x, g).idx;
      m.bits_[y >> 6] |= std::uint64_t{1} << (y & 63);
    });
  }
  m.count_ = count_;
  return m;
}

SubsetMask SubsetMask::negate() const {
  SubsetMask m(group_);
  for_each([&](Element x) {
    const auto y = group_.neg(x).idx;
    m.bits_[y >> 6] |= std::uint64_t{1} << (y & 63);
  });
  m.count_ = count_;
  return m;
}

bool SubsetMask::is_subset_of(const SubsetMask& other) const {
  require_same_group(other);
  for (std::size_t w = 0; w < bits_.size(); ++w)
    if (bits_[w] & ~other.bits_[w]) return false;
  return true;
}

bool SubsetMask::intersects(const SubsetMask& other) const {
  require_same_group(other);
  for (std::size_t w = 0; w < bits_.size(); ++w)
    if (bits_[w] & other.bits_[w]) return true;
  return false;
}

SubsetMask& SubsetMask::operator|=(const SubsetMask& other) {
  require_same_group(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] |= other.bits_[w];
  recount();
  return *this;
}

SubsetMask& SubsetMask::operator&=(const SubsetMask& other) {
  require_same_group(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= other.bits_[w];
  recount();
  return *this;
}

SubsetMask& SubsetMask::operator-=(const SubsetMask& other) {
  require_same_group(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= ~other.bits_[w];
  recount();
  return *this;
}

std::string SubsetMask::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::uint32_t n = group_.order();
  const std::uint32_t nibbles = std::max<std::uint32_t>(1, (n + 3) / 4);
  std::string out = "0x";
  out.reserve(nibbles + 2);
  for (std::uint32_t k = nibbles; k-- > 0;) {
    const std::uint32_t bit = 4 * k;
    const std::uint64_t word = bits_[bit >> 6];
    out.push_back(kDigits[(word >> (bit & 63)) & 0xf]);
  }
  return out;
}

std::size_t SubsetMask::hash() const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto w : bits_) {
    h ^= static_cast<std::size_t>(w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }
  return h;
}

void SubsetMask::require_same_group(const SubsetMask& other) const {
  if (!(group_ == other.group_)) {
    throw Error("subsets belong to different groups (" + group_.to_string() + " vs " +
                other.group_.to_string() + ")");
  }
}

void SubsetMask::recount() noexcept {
  std::uint32_t c = 0;
  for (auto w : bits_) c += static_cast<std::uint32_t>(std::popcount(w));
  count_ = c;
}

void SubsetMask::clear_tail() noexcept {
  const std::uint32_t n = group_.order();
  if (n % 64) bits_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
}

namespace {

// Any bit strictly above position `bit` of word `w`.
bool has_bit_above(std::span<const std::uint64_t> words, std::size_t w, int bit) {
  const std::uint64_t above = bit == 63 ? 0 : words[w] >> (bit + 1);
  if (above) return true;
  for (std::size_t i = w + 1; i < words.size(); ++i)
    if (words[i]) return true;
  return false;
}

}  // namespace

bool lex_less(const SubsetMask& a, const SubsetMask& b) {
  // The index lists agree below the lowest differing bit d. The list holding
  // d is smaller unless the other list stops before d.
  const auto x = a.words();
  const auto y = b.words();
  const std::size_t len = std::min(x.size(), y.size());
  for (std::size_t w = 0; w < len; ++w) {
    const std::uint64_t diff = x[w] ^ y[w];
    if (!diff) continue;
    const int d = std::countr_zero(diff);
    if ((x[w] >> d) & 1u) return has_bit_above(y, w, d);
    return !has_bit_above(x, w, d);
  }
  return false;
}

}  // namespace smallsum
