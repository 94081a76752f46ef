#include <bit>
#include <cstdint>
#include <vector>

#include "ctxrand/errors.hpp"
#include "ctxrand/protocol.hpp"

namespace ctxrand {

namespace {

std::vector<std::uint64_t> pack(const std::vector<std::uint8_t>& bits, std::size_t words) {
  std::vector<std::uint64_t> out(words, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw InvalidParameter("bit strings must hold 0/1 values");
    if (bits[i]) out[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> toeplitz_extract(const std::vector<std::uint8_t>& raw,
                                           const std::vector<std::uint8_t>& seed, std::int64_t out_len,
                                           std::int64_t certified_bits) {
  if (out_len < 0) throw InvalidParameter("negative output length");
  if (out_len > certified_bits)
    throw EntropyExhausted("requested " + std::to_string(out_len) + " bits but only " +
                           std::to_string(certified_bits) + " are certified");
  const std::size_t n = raw.size();
  if (out_len == 0) return {};
  if (n == 0) throw InvalidParameter("empty raw string");
  if (seed.size() != n + static_cast<std::size_t>(out_len) - 1)
    throw InvalidParameter("seed length must equal raw length + output length - 1");

  // out[i] = parity(seed[i .. i+n-1] & reversed raw).
  std::vector<std::uint8_t> rev(raw.rbegin(), raw.rend());
  const std::size_t words = (n + 63) / 64;
  const auto r = pack(rev, words);
  const auto s = pack(seed, (seed.size() + 63) / 64 + 1);
  const std::uint64_t tail_mask = (n % 64 == 0) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (n % 64)) - 1);

  std::vector<std::uint8_t> out(static_cast<std::size_t>(out_len));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t base = i >> 6, shift = i & 63;
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t win = s[base + w] >> shift;
      if (shift && base + w + 1 < s.size()) win |= s[base + w + 1] << (64 - shift);
      if (w + 1 == words) win &= tail_mask;
      acc ^= win & r[w];
    }
    out[i] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return out;
}

}  // namespace ctxrand
