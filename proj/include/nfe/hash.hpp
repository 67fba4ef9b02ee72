#pragma once

// Salted-hash primitives for authentication records. SHA-256 (via OpenSSL)
// over pepper || payload; the pepper comes from the environment and is never
// persisted. Digest comparison is constant-time in the digest contents.

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfe {

using Digest = std::array<std::uint8_t, 32>;
using Salt = std::array<std::uint8_t, 16>;

inline constexpr const char* kPepperEnvVar = "NFE_PEPPER";

// digest = SHA-256(pepper || payload); an absent pepper equals an empty one.
inline Digest hash_digest(const std::vector<std::uint8_t>& payload,
                          const std::vector<std::uint8_t>& pepper = {}) {
    if (payload.empty()) throw std::invalid_argument("hash_digest: empty payload");

    Digest digest{};
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("hash_digest: EVP_MD_CTX_new failed");
    unsigned int len = 0;
    const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                    (pepper.empty() || EVP_DigestUpdate(ctx, pepper.data(), pepper.size()) == 1) &&
                    EVP_DigestUpdate(ctx, payload.data(), payload.size()) == 1 &&
                    EVP_DigestFinal_ex(ctx, digest.data(), &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok || len != digest.size()) throw std::runtime_error("hash_digest: SHA-256 failed");
    return digest;
}

inline bool digest_equal_consttime(const Digest& a, const Digest& b) {
    unsigned int diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<unsigned int>(a[i] ^ b[i]);
    return diff == 0;
}

// 16 bytes from the OS entropy source.
inline Salt random_salt() {
    std::random_device rd;
    Salt salt{};
    for (std::size_t i = 0; i < salt.size(); i += 4) {
        const std::uint32_t word = rd();
        for (std::size_t j = 0; j < 4; ++j)
            salt[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
    }
    return salt;
}

// Hex-decoded NFE_PEPPER, empty when unset. Treated as secret; callers must
// not write it anywhere.
inline std::vector<std::uint8_t> pepper_from_env() {
    const char* hex = std::getenv(kPepperEnvVar);
    if (hex == nullptr) return {};
    const std::string text(hex);
    if (text.size() % 2 != 0)
        throw std::invalid_argument("NFE_PEPPER: odd-length hex string");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("NFE_PEPPER: invalid hex digit");
    };
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(nibble(text[i]) * 16 + nibble(text[i + 1])));
    return out;
}

}  // namespace nfe
