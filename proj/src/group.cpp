#include "smallsum/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace smallsum {

struct GroupSpec::Impl {
  std::vector<std::uint32_t> factors;
  std::vector<std::uint32_t> strides;
  std::uint32_t order = 1;
  std::vector<std::uint32_t> neg;
  std::vector<std::uint32_t> add;  // order*order entries, or empty

  std::uint32_t add_digits(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const std::uint32_t d = factors[i];
      const std::uint32_t s = strides[i];
      std::uint32_t x = (a / s) % d + (b / s) % d;
      if (x >= d) x -= d;
      out += x * s;
    }
    return out;
  }
};

GroupSpec::GroupSpec() {
  static const std::shared_ptr<const Impl> trivial = [] {
    auto p = std::make_shared<Impl>();
    p->factors = {1};
    p->strides = {1};
    p->order = 1;
    p->neg = {0};
    p->add = {0};
    return std::shared_ptr<const Impl>(p);
  }();
  impl_ = trivial;
}
GroupSpec::GroupSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

const std::vector<std::uint32_t>& GroupSpec::factors() const noexcept { return impl_->factors; }
std::uint32_t GroupSpec::order() const noexcept { return impl_->order; }

Element GroupSpec::add(Element a, Element b) const noexcept {
  if (!impl_->add.empty()) return Element{impl_->add[a.idx * impl_->order + b.idx]};
  return Element{impl_->add_digits(a.idx, b.idx)};
}

Element GroupSpec::neg(Element a) const noexcept { return Element{impl_->neg[a.idx]}; }

Element GroupSpec::sub(Element a, Element b) const noexcept { return add(a, neg(b)); }

Element GroupSpec::multiple(Element a, std::int64_t k) const noexcept {
  const auto& f = impl_->factors;
  const auto& s = impl_->strides;
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::int64_t d = f[i];
    const std::int64_t digit = (a.idx / s[i]) % f[i];
    std::int64_t x = ((digit % d) * (k % d)) % d;
    if (x < 0) x += d;
    out += static_cast<std::uint32_t>(x) * s[i];
  }
  return Element{out};
}

std::uint32_t GroupSpec::element_order(Element a) const {
  std::uint64_t ord = 1;
  const auto& f = impl_->factors;
  const auto& s = impl_->strides;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::uint32_t digit = (a.idx / s[i]) % f[i];
    const std::uint32_t o = f[i] / std::gcd(f[i], digit);
    ord = std::lcm(ord, static_cast<std::uint64_t>(o));
  }
  return static_cast<std::uint32_t>(ord);
}

std::vector<std::uint32_t> GroupSpec::digits(Element a) const {
  const auto& f = impl_->factors;
  const auto& s = impl_->strides;
  std::vector<std::uint32_t> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = (a.idx / s[i]) % f[i];
  return out;
}

Element GroupSpec::from_digits(std::span<const std::int64_t> digits) const {
  const auto& f = impl_->factors;
  if (digits.size() != f.size()) {
    throw Error("element has " + std::to_string(digits.size()) + " coordinates, group " +
                to_string() + " needs " + std::to_string(f.size()));
  }
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::int64_t d = f[i];
    std::int64_t x = digits[i] % d;
    if (x < 0) x += d;
    out += static_cast<std::uint32_t>(x) * impl_->strides[i];
  }
  return Element{out};
}

const std::uint32_t* GroupSpec::add_table() const noexcept {
  return impl_->add.empty() ? nullptr : impl_->add.data();
}

std::string GroupSpec::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < impl_->factors.size(); ++i) {
    if (i) os << ',';
    os << impl_->factors[i];
  }
  return os.str();
}

bool operator==(const GroupSpec& a, const GroupSpec& b) noexcept {
  return a.impl_ == b.impl_ || a.impl_->factors == b.impl_->factors;
}

GroupSpec make_group(std::vector<std::uint32_t> factors, std::uint32_t cap) {
  if (factors.empty()) throw Error("group needs at least one cyclic factor");
  std::uint64_t n = 1;
  for (auto d : factors) {
    if (d == 0) throw Error("cyclic factor must be >= 1");
    n *= d;
    if (n > cap) {
      throw Error("group order exceeds cap of " + std::to_string(cap) + " elements");
    }
  }
  auto impl = std::make_shared<GroupSpec::Impl>();
  impl->factors = std::move(factors);
  impl->order = static_cast<std::uint32_t>(n);
  const std::size_t m = impl->factors.size();
  impl->strides.assign(m, 1);
  for (std::size_t i = m; i-- > 1;) impl->strides[i - 1] = impl->strides[i] * impl->factors[i];

  impl->neg.resize(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t d = impl->factors[i];
      const std::uint32_t digit = (x / impl->strides[i]) % d;
      out += ((d - digit) % d) * impl->strides[i];
    }
    impl->neg[x] = out;
  }
  if (n <= GroupSpec::kTableOrder) {
    impl->add.resize(n * n);
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b) impl->add[a * n + b] = impl->add_digits(a, b);
  }
  return GroupSpec(std::shared_ptr<const GroupSpec::Impl>(std::move(impl)));
}

GroupSpec parse_group(const std::string& literal, std::uint32_t cap) {
  std::vector<std::uint32_t> factors;
  std::string token;
  std::istringstream is(literal);
  while (std::getline(is, token, ',')) {
    const auto b = token.find_first_not_of(" \t[]");
    const auto e = token.find_last_not_of(" \t[]");
    if (b == std::string::npos) continue;
    token = token.substr(b, e - b + 1);
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw Error("bad group literal '" + literal + "'");
    factors.push_back(static_cast<std::uint32_t>(v));
  }
  return make_group(std::move(factors), cap);
}

namespace {

// Partitions of e into non-increasing parts.
void partitions(std::uint32_t e, std::uint32_t max_part, std::vector<std::uint32_t>& cur,
                std::vector<std::vector<std::uint32_t>>& out) {
  if (e == 0) {
    out.push_back(cur);
    return;
  }
  for (std::uint32_t p = std::min(e, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(e - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::vector<std::uint32_t>> abelian_groups_of_order(std::uint32_t n) {
  if (n == 0) return {};
  if (n == 1) return {{1}};
  std::vector<std::pair<std::uint32_t, std::uint32_t>> primes;
  std::uint32_t rest = n;
  for (std::uint32_t p = 2; p * p <= rest; ++p) {
    std::uint32_t e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e) primes.emplace_back(p, e);
  }
  if (rest > 1) primes.emplace_back(rest, 1);

  // Invariant factors: the j-th largest factor is the product over primes of
  // p^{lambda_j}, lambda the partition chosen for p.
  std::vector<std::vector<std::uint32_t>> out{{}};
  for (auto [p, e] : primes) {
    std::vector<std::vector<std::uint32_t>> parts;
    std::vector<std::uint32_t> cur;
    partitions(e, e, cur, parts);
    std::vector<std::vector<std::uint32_t>> next;
    for (const auto& partial : out) {
      for (const auto& lambda : parts) {
        // partial holds factors in descending order
        std::vector<std::uint32_t> merged(std::max(partial.size(), lambda.size()), 1);
        for (std::size_t j = 0; j < partial.size(); ++j) merged[j] = partial[j];
        for (std::size_t j = 0; j < lambda.size(); ++j) {
          std::uint32_t pk = 1;
          for (std::uint32_t t = 0; t < lambda[j]; ++t) pk *= p;
          merged[j] *= pk;
        }
        next.push_back(std::move(merged));
      }
    }
    out = std::move(next);
  }
  for (auto& f : out) std::reverse(f.begin(), f.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::vector<std::vector<std::uint32_t>> abelian_groups_up_to(std::uint32_t max_order,
                                                             std::uint32_t min_order) {
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t n = std::max<std::uint32_t>(min_order, 1); n <= max_order; ++n) {
    auto g = abelian_groups_of_order(n);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

}  // namespace smallsum
