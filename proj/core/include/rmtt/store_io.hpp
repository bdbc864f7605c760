#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "rmtt/single_store.hpp"
#include "rmtt/twin_store.hpp"
#include "rmtt/vp_store.hpp"

namespace rmtt::io {

class StoreError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class StoreKind { Single, Vp, Rmtt };

std::string to_string(StoreKind kind);
std::optional<StoreKind> store_kind_from_string(std::string_view s);

/// Owns whichever store a directory holds.
struct AnyStore {
    StoreKind kind = StoreKind::Single;
    std::optional<SingleStore> single;
    std::optional<VpStore> vp;
    std::optional<TwinTables> rmtt;

    const Dictionary& dict() const;
    std::size_t triple_count() const;
};

/// Key=value manifest, kept sorted by key on disk so saves are
/// byte-identical.
using Manifest = std::map<std::string, std::string>;

Manifest build_manifest(const AnyStore& store);
Manifest read_manifest(const std::filesystem::path& dir);

/// Directory layout: manifest, dict.tsv, tableK.tsv (ascending SPO rows),
/// and for twin stores the six membership-set files. Writes into a
/// temporary sibling directory and renames it into place; fails if the
/// target already exists.
void save_store(const AnyStore& store, const std::filesystem::path& dir);

/// Rebuilds indexes and membership sets, verifying every count in the
/// manifest against the payload. Throws StoreError naming the offending
/// file on any mismatch.
AnyStore load_store(const std::filesystem::path& dir);

}  // namespace rmtt::io
