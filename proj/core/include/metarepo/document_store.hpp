#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metarepo {

using Json = nlohmann::json;

/// Sorted object keys, no insignificant whitespace, terminated by `\n`.
std::string canonical_json(const Json& value);

/// Filesystem-safe form of a key or collection name: `%`, `/`, control bytes
/// and a leading `.` become `%XX`.
std::string encode_name(std::string_view name);
std::string decode_name(std::string_view encoded);

std::string sha256_hex(std::string_view bytes);

struct Document {
    std::string collection;
    std::string key;
    Json body;

    bool operator==(const Document&) const = default;
};

enum class PutOutcome { created, unchanged, replaced };

struct PendingPut {
    std::string collection;
    std::string key;
    Json body;
    /// The caller has already resolved conflicts for this document; overwrite it.
    bool replace = false;
};

/// Embedded document store rooted at a directory.
///
/// Layout:
///   collections/<collection>/<key>.json   head documents
///   objects/<sha256>.json                 snapshot content, stored once per distinct document
///   revisions/<r>.json                    collection -> key -> object hash
///   MANIFEST.json                         revision ids and head key listings
///   LOCK                                  held exclusively by a mutating call
///
/// Each file is written to a temporary name and renamed into place, so a
/// document is either fully present or absent after a crash.
class DocumentStore {
public:
    /// Called at named points of every file write; throwing simulates a crash there.
    /// Stages: "temp-written" (before the rename) and "renamed".
    using FaultHook = std::function<void(std::string_view stage, const std::filesystem::path& target)>;

    /// Creates the layout when absent. Stray temporary files are removed and the
    /// manifest is rebuilt unless another writer holds the lock.
    explicit DocumentStore(std::filesystem::path root);

    const std::filesystem::path& root() const noexcept { return root_; }

    /// Identical body: unchanged. Different body: ConflictError unless `force`.
    PutOutcome put(const std::string& collection, const std::string& key, const Json& body, bool force = false);

    /// Checks every put for conflicts before writing any of them.
    std::vector<PutOutcome> put_all(std::span<const PendingPut> puts, bool force = false);

    /// Holds the writer lock while `plan` reads the store and returns the puts
    /// to apply, then applies them as put_all does.
    using Plan = std::function<std::vector<PendingPut>(const DocumentStore&)>;
    std::vector<PutOutcome> transact(const Plan& plan, bool force = false);

    std::optional<Document> find(const std::string& collection, const std::string& key) const;
    /// Throws NotFoundError.
    Document get(const std::string& collection, const std::string& key) const;

    /// Documents whose key starts with `prefix`, in key order. Unknown collections yield [].
    std::vector<Document> query(const std::string& collection, std::string_view prefix = {},
                                std::optional<std::int64_t> revision = std::nullopt) const;

    std::vector<std::string> collections(std::optional<std::int64_t> revision = std::nullopt) const;

    /// Freezes the head under a new revision id, one above the largest so far.
    std::int64_t snapshot();

    /// Throws NotFoundError for an unknown revision or a key absent from it.
    Document read_at(std::int64_t revision, const std::string& collection, const std::string& key) const;
    /// Exact bytes of a document as frozen in a revision.
    std::string read_bytes_at(std::int64_t revision, const std::string& collection, const std::string& key) const;

    /// Strictly increasing.
    std::vector<std::int64_t> list_revisions() const;

    void set_fault_hook(FaultHook hook) { fault_hook_ = std::move(hook); }

private:
    class WriterLock;

    std::filesystem::path document_path(const std::string& collection, const std::string& key) const;
    Json load_revision(std::int64_t revision) const;
    void write_file(const std::filesystem::path& target, std::string_view bytes) const;
    void write_manifest() const;
    void sweep_temporaries() const;
    PutOutcome classify(const PendingPut& put, bool force) const;
    std::vector<PutOutcome> apply_locked(std::span<const PendingPut> puts, bool force);

    std::filesystem::path root_;
    FaultHook fault_hook_;
};

} // namespace metarepo
