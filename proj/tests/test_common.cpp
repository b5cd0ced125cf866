#include <gtest/gtest.h>

#include <string>

#include "psim/common/bytes.hpp"
#include "psim/common/crypto.hpp"
#include "psim/common/result.hpp"
#include "psim/common/rng.hpp"

namespace psim {
namespace {

TEST(Base64Url, RoundTripsEveryLength) {
  Rng rng(3);
  for (std::size_t n = 0; n < 70; ++n) {
    Bytes data = rng.bytes(n);
    std::string text = base64url_encode(data);
    EXPECT_EQ(text.find('='), std::string::npos);
    auto back = base64url_decode(text);
    ASSERT_TRUE(back) << n;
    EXPECT_EQ(*back, data);
  }
}

TEST(Base64Url, KnownVectors) {
  EXPECT_EQ(base64url_encode(to_bytes("")), "");
  EXPECT_EQ(base64url_encode(to_bytes("f")), "Zg");
  EXPECT_EQ(base64url_encode(to_bytes("fo")), "Zm8");
  EXPECT_EQ(base64url_encode(to_bytes("foo")), "Zm9v");
  EXPECT_EQ(base64url_encode(to_bytes("foobar")), "Zm9vYmFy");
  const Bytes high = {0xfb, 0xff};
  EXPECT_EQ(base64url_encode(high), "-_8");
}

TEST(Base64Url, RejectsNonCanonicalInput) {
  EXPECT_FALSE(base64url_decode("Zg=="));
  EXPECT_FALSE(base64url_decode("Zm9v+A"));
  EXPECT_FALSE(base64url_decode("Zm9v/A"));
  EXPECT_FALSE(base64url_decode("Z"));      // impossible length
  EXPECT_FALSE(base64url_decode("Zh"));     // trailing bits set
  EXPECT_TRUE(base64url_decode("Zg"));
}

TEST(Hex, RoundTripAndRejects) {
  const Bytes data = {0x00, 0x7f, 0x80, 0xff};
  EXPECT_EQ(hex_encode(data), "007f80ff");
  EXPECT_EQ(*hex_decode("007f80ff"), data);
  EXPECT_EQ(*hex_decode("007F80FF"), data);
  EXPECT_FALSE(hex_decode("abc"));
  EXPECT_FALSE(hex_decode("zz"));
}

TEST(Bytes, ContainsSubsequence) {
  Bytes hay = to_bytes("pseudonym");
  EXPECT_TRUE(contains_subsequence(hay, to_bytes("udo")));
  EXPECT_TRUE(contains_subsequence(hay, to_bytes("")));
  EXPECT_FALSE(contains_subsequence(hay, to_bytes("nyms")));
}

TEST(Crypto, Sha256KnownVector) {
  auto d = crypto::sha256(to_bytes("abc"));
  EXPECT_EQ(hex_encode(d), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Crypto, HmacKnownVector) {
  auto mac = crypto::hmac_sha256(to_bytes("Jefe"), to_bytes("what do ya want for nothing?"));
  EXPECT_EQ(hex_encode(mac), "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST(Crypto, Ed25519SignVerify) {
  crypto::Seed seed{};
  seed[0] = 7;
  auto keys = crypto::ed25519_from_seed(seed);
  Bytes msg = to_bytes("beacon");
  Bytes sig = crypto::ed25519_sign(keys, msg);
  EXPECT_EQ(sig.size(), 64u);
  EXPECT_TRUE(crypto::ed25519_verify(keys.public_key, msg, sig));
  sig[10] ^= 1;
  EXPECT_FALSE(crypto::ed25519_verify(keys.public_key, msg, sig));
  EXPECT_EQ(crypto::ed25519_from_seed(seed).public_key, keys.public_key);
}

TEST(Crypto, X25519Agreement) {
  crypto::Seed a{}, b{};
  a[0] = 1;
  b[0] = 2;
  auto ka = crypto::x25519_from_seed(a);
  auto kb = crypto::x25519_from_seed(b);
  std::array<std::uint8_t, 32> s1{}, s2{};
  ASSERT_TRUE(crypto::x25519_shared(ka.secret_key, kb.public_key, s1));
  ASSERT_TRUE(crypto::x25519_shared(kb.secret_key, ka.public_key, s2));
  EXPECT_EQ(s1, s2);
  std::array<std::uint8_t, 32> zero{};
  EXPECT_FALSE(crypto::x25519_shared(ka.secret_key, zero, s1));
}

TEST(Crypto, ConstantTimeEqual) {
  Bytes a = {1, 2, 3}, b = {1, 2, 3}, c = {1, 2, 4}, d = {1, 2};
  EXPECT_TRUE(crypto::constant_time_equal(a, b));
  EXPECT_FALSE(crypto::constant_time_equal(a, c));
  EXPECT_FALSE(crypto::constant_time_equal(a, d));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, ForkIgnoresParentDraws) {
  Rng parent(42);
  Rng before = parent.fork("loss");
  for (int i = 0; i < 10; ++i) parent.next_u64();
  Rng after = parent.fork("loss");
  EXPECT_EQ(before.next_u64(), after.next_u64());
  EXPECT_NE(parent.fork("loss").seed(), parent.fork("noise").seed());
}

TEST(Rng, UniformAndBernoulliBounds) {
  Rng rng(1);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform(2.0, 3.0);
    EXPECT_GE(u, 2.0);
    EXPECT_LT(u, 3.0);
    hits += rng.bernoulli(0.3);
  }
  EXPECT_NEAR(hits / 10000.0, 0.3, 0.02);
  EXPECT_FALSE(rng.bernoulli(0.0));
  EXPECT_TRUE(rng.bernoulli(1.0));
}

TEST(Rng, Fnv1aKnownValue) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Result, HoldsValueOrError) {
  Result<int, std::string> good(5);
  Result<int, std::string> bad(std::string("nope"));
  ASSERT_TRUE(good);
  EXPECT_EQ(*good, 5);
  ASSERT_FALSE(bad);
  EXPECT_EQ(bad.error(), "nope");
}

}  // namespace
}  // namespace psim
