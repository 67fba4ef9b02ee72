#pragma once

// Authentication records and the persistent store. A record holds exactly
// the four public components: codebook parameters, difference vector, salt,
// and the salted digest of the decision-region center. No center or raw
// biometric material is ever written.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nfe/binary_io.hpp"
#include "nfe/binary_sketch.hpp"
#include "nfe/errors.hpp"
#include "nfe/expander.hpp"
#include "nfe/geometry.hpp"
#include "nfe/hash.hpp"
#include "nfe/lattice.hpp"

namespace nfe {

enum class Scheme : std::uint8_t { lattice = 1, binary = 2 };

inline Scheme scheme_from_name(const std::string& name) {
    if (name == "lattice") return Scheme::lattice;
    if (name == "binary") return Scheme::binary;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

inline const char* scheme_name(Scheme scheme) {
    return scheme == Scheme::lattice ? "lattice" : "binary";
}

struct AuthRecord {
    std::string username;
    Scheme scheme = Scheme::lattice;
    std::vector<std::uint8_t> codebook_params;
    std::vector<std::uint8_t> dv;
    Salt salt{};
    Digest digest{};

    bool operator==(const AuthRecord&) const = default;
};

struct RecordStore {
    std::uint16_t version = 1;
    std::vector<AuthRecord> records;  // insertion order, usernames unique

    const AuthRecord* find(const std::string& username) const {
        for (const auto& r : records)
            if (r.username == username) return &r;
        return nullptr;
    }

    bool operator==(const RecordStore&) const = default;
};

// Canonical center encoding fed to the hash:
// magic NFEC1 | scheme byte | dim (u32 LE) | payload | salt.
// Fixed-width fields make it injective per scheme.
inline std::vector<std::uint8_t> canonical_serialize(const FixedVector& center, const Salt& salt) {
    std::vector<std::uint8_t> out;
    put_bytes(out, "NFEC1", 5);
    put_u8(out, static_cast<std::uint8_t>(Scheme::lattice));
    put_u32le(out, static_cast<std::uint32_t>(center.dim()));
    for (auto v : center.values) put_i64le(out, v);
    put_bytes(out, salt.data(), salt.size());
    return out;
}

inline std::vector<std::uint8_t> canonical_serialize(const BitVector& center, const Salt& salt) {
    std::vector<std::uint8_t> out;
    put_bytes(out, "NFEC1", 5);
    put_u8(out, static_cast<std::uint8_t>(Scheme::binary));
    put_u32le(out, static_cast<std::uint32_t>(center.size()));
    put_bytes(out, center.bytes().data(), center.bytes().size());
    put_bytes(out, salt.data(), salt.size());
    return out;
}

struct EnrollConfig {
    Scheme scheme = Scheme::lattice;
    double quantile = 0.95;           // per-user radius quantile
    double radius_multiplier = 1.0;   // scales the fitted radius (evaluation sweeps)
    SupportSphere support;            // required for the lattice scheme
    std::uint16_t code_id = kCodeIdHamming7;  // binary scheme block code
    std::vector<std::uint8_t> pepper;
    std::optional<Salt> fixed_salt;   // reproducible stores; default draws from the OS
};

namespace detail {

inline std::vector<std::uint8_t> serialize_fixed_dv(const FixedVector& dv) {
    std::vector<std::uint8_t> out;
    for (auto v : dv.values) put_i64le(out, v);
    return out;
}

inline FixedVector deserialize_fixed_dv(const std::vector<std::uint8_t>& bytes, std::size_t dim) {
    if (bytes.size() != dim * 8) throw FormatError("record dv: wrong length");
    ByteReader in(bytes);
    FixedVector dv;
    dv.values.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) dv.values.push_back(in.i64le());
    return dv;
}

}  // namespace detail

// Registration pipeline: expander outputs -> decision region -> sketch ->
// salted digest of the canonical center. Appends to the store and returns
// the new record.
inline const AuthRecord& enroll_user(RecordStore& store, const std::string& username,
                                     const std::vector<Vec>& enrollment_vectors,
                                     const ExpanderParams& expander, const EnrollConfig& config) {
    if (username.empty()) throw std::invalid_argument("enroll_user: empty username");
    if (enrollment_vectors.empty())
        throw std::invalid_argument("enroll_user: need at least one enrollment vector");
    if (store.find(username) != nullptr)
        throw DuplicateUserError("enroll_user: user '" + username + "' already enrolled");

    std::vector<Vec> outputs;
    outputs.reserve(enrollment_vectors.size());
    for (const auto& v : enrollment_vectors) outputs.push_back(forward(expander, v));

    DecisionRegion region = fit_user_region(outputs, config.quantile, username);
    region.radius = std::max(region.radius * config.radius_multiplier, kRadiusFloor);

    AuthRecord record;
    record.username = username;
    record.scheme = config.scheme;
    record.salt = config.fixed_salt ? *config.fixed_salt : random_salt();

    if (config.scheme == Scheme::lattice) {
        if (config.support.center.size() != expander.output_dim())
            throw std::invalid_argument("enroll_user: support sphere dimension mismatch");
        // Spacing 2r (snapped to the fixed-point grid) so the Voronoi cube's
        // inscribed sphere is the user's decision region. Recovery is invariant
        // under adding lattice vectors to dv, so the spacing is forced odd and
        // above 255: no byte-aligned corruption delta k*2^(8j), 0 < |k| <= 255,
        // is then a lattice vector, and any single-byte tamper of dv changes
        // the recovered center. The 257 floor only binds for degenerate radii
        // (about 1.2e-4 in real units).
        const std::int64_t spacing =
            std::max<std::int64_t>(257, to_fixed(2.0 * region.radius)) | 1;
        const auto codebook = LatticeCodebook::from_support(spacing, config.support);
        const FixedVector center = quantize(region.center);
        const auto sketch = make_sketch(codebook, center);
        record.codebook_params = serialize_codebook(codebook);
        record.dv = detail::serialize_fixed_dv(sketch.sketch.dv);
        record.digest = hash_digest(canonical_serialize(center, record.salt), config.pepper);
    } else {
        const BitVector template_bits = binarize(region.center);
        const CodeLayout layout = layout_for_dim(template_bits.size(), config.code_id);
        const auto sketch = make_binary_sketch(layout, template_bits);
        record.codebook_params = serialize_layout(layout);
        record.dv = sketch.sketch.dv_bits.bytes();
        record.digest = hash_digest(canonical_serialize(template_bits, record.salt), config.pepper);
    }

    store.records.push_back(std::move(record));
    return store.records.back();
}

enum class VerifyResult : std::uint8_t { accept, reject };

// Verification pipeline: expander output -> recover center through the
// record's scheme -> salted digest -> constant-time comparison.
inline VerifyResult verify_user(const AuthRecord& record, const Vec& probe,
                                const ExpanderParams& expander,
                                const std::vector<std::uint8_t>& pepper = {}) {
    if (probe.size() != expander.input_dim())
        throw std::invalid_argument("verify_user: probe dimension mismatch");
    const Vec out = forward(expander, probe);

    std::vector<std::uint8_t> payload;
    if (record.scheme == Scheme::lattice) {
        const auto codebook = deserialize_codebook(record.codebook_params);
        if (codebook.dim != out.size())
            throw std::invalid_argument("verify_user: record dimension mismatch");
        LatticeSketch sketch{detail::deserialize_fixed_dv(record.dv, codebook.dim)};
        const FixedVector recovered = recover_center(codebook, sketch, quantize(out));
        payload = canonical_serialize(recovered, record.salt);
    } else {
        const auto layout = deserialize_layout(record.codebook_params);
        if (template_length(layout) != out.size())
            throw std::invalid_argument("verify_user: record dimension mismatch");
        if (record.dv.size() != (coded_length(layout) + 7) / 8)
            throw FormatError("record dv: wrong length");
        BinarySketch sketch{BitVector(record.dv, coded_length(layout)), layout};
        const auto recovered = recover_binary_center(layout, sketch, binarize(out));
        if (!recovered) return VerifyResult::reject;  // uncorrectable block
        payload = canonical_serialize(*recovered, record.salt);
    }
    return digest_equal_consttime(hash_digest(payload, pepper), record.digest)
               ? VerifyResult::accept
               : VerifyResult::reject;
}

// Store format: magic NFES1, version (u16 LE), record count (u32 LE), then
// length-prefixed records.
inline std::vector<std::uint8_t> save_store(const RecordStore& store) {
    std::vector<std::uint8_t> out;
    put_bytes(out, "NFES1", 5);
    put_u16le(out, store.version);
    put_u32le(out, static_cast<std::uint32_t>(store.records.size()));
    for (const auto& r : store.records) {
        put_u32le(out, static_cast<std::uint32_t>(r.username.size()));
        put_bytes(out, r.username.data(), r.username.size());
        put_u8(out, static_cast<std::uint8_t>(r.scheme));
        put_u32le(out, static_cast<std::uint32_t>(r.codebook_params.size()));
        put_bytes(out, r.codebook_params.data(), r.codebook_params.size());
        put_u32le(out, static_cast<std::uint32_t>(r.dv.size()));
        put_bytes(out, r.dv.data(), r.dv.size());
        put_bytes(out, r.salt.data(), r.salt.size());
        put_bytes(out, r.digest.data(), r.digest.size());
    }
    return out;
}

inline RecordStore load_store(const std::vector<std::uint8_t>& bytes) {
    ByteReader in(bytes);
    in.expect_magic("NFES1", 5, "record store");
    RecordStore store;
    store.version = in.u16le();
    if (store.version != 1)
        throw FormatError("record store: unsupported version " + std::to_string(store.version));
    const std::uint32_t count = in.u32le();
    for (std::uint32_t i = 0; i < count; ++i) {
        AuthRecord r;
        const std::uint32_t name_len = in.u32le();
        const auto name = in.bytes(name_len);
        r.username.assign(name.begin(), name.end());
        const std::uint8_t scheme = in.u8();
        if (scheme != static_cast<std::uint8_t>(Scheme::lattice) &&
            scheme != static_cast<std::uint8_t>(Scheme::binary))
            throw FormatError("record store: unknown scheme byte");
        r.scheme = static_cast<Scheme>(scheme);
        r.codebook_params = in.bytes(in.u32le());
        r.dv = in.bytes(in.u32le());
        in.raw(r.salt.data(), r.salt.size());
        in.raw(r.digest.data(), r.digest.size());
        if (store.find(r.username) != nullptr)
            throw FormatError("record store: duplicate username '" + r.username + "'");
        store.records.push_back(std::move(r));
    }
    if (!in.at_end()) throw FormatError("record store: trailing bytes");
    return store;
}

// Atomic persistence: write to a temp file in the same directory, then rename.
inline void save_store_file(const RecordStore& store, const std::filesystem::path& path) {
    const auto bytes = save_store(store);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot open '" + tmp.string() + "' for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw FormatError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

inline RecordStore load_store_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open record store '" + path.string() + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return load_store(bytes);
}

}  // namespace nfe
