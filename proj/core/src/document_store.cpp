#include "metarepo/document_store.hpp"

#include "metarepo/error.hpp"

#include <openssl/evp.h>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace metarepo {

namespace {

constexpr std::string_view kSuffix = ".json";
constexpr std::string_view kTempSuffix = ".tmp";

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string system_error_text(const std::string& what, const fs::path& path) {
    return what + " " + path.string() + ": " + std::strerror(errno);
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw StoreError("cannot create " + dir.string() + ": " + ec.message());
}

std::optional<std::int64_t> parse_revision_name(const fs::path& file) {
    const std::string stem = file.stem().string();
    if (file.extension() != kSuffix || stem.empty()) return std::nullopt;
    std::int64_t r = 0;
    auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), r);
    if (ec != std::errc{} || ptr != stem.data() + stem.size() || r <= 0) return std::nullopt;
    return r;
}

bool is_document_file(const fs::directory_entry& entry) {
    const std::string name = entry.path().filename().string();
    return entry.is_regular_file() && name.size() > kSuffix.size() && name.ends_with(kSuffix);
}

std::string key_of_file(const fs::path& file) {
    const std::string name = file.filename().string();
    return decode_name(std::string_view(name).substr(0, name.size() - kSuffix.size()));
}

Json envelope(const std::string& key, const Json& body) { return Json{{"key", key}, {"body", body}}; }

} // namespace

std::string canonical_json(const Json& value) { return value.dump() + "\n"; }

std::string encode_name(std::string_view name) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (std::size_t i = 0; i < name.size(); ++i) {
        const auto c = static_cast<unsigned char>(name[i]);
        const bool escape = c == '%' || c == '/' || c < 0x20 || c == 0x7f || (i == 0 && c == '.');
        if (escape) {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xF];
        } else {
            out += static_cast<char>(c);
        }
    }
    return out;
}

std::string decode_name(std::string_view encoded) {
    std::string out;
    for (std::size_t i = 0; i < encoded.size(); ++i) {
        if (encoded[i] != '%') {
            out += encoded[i];
            continue;
        }
        if (i + 2 >= encoded.size()) throw StoreError("bad escape in name");
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(encoded.data() + i + 1, encoded.data() + i + 3, value, 16);
        if (ec != std::errc{} || ptr != encoded.data() + i + 3) throw StoreError("bad escape in name");
        out += static_cast<char>(value);
        i += 2;
    }
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw StoreError("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

class DocumentStore::WriterLock {
public:
    explicit WriterLock(const fs::path& root, bool wait = false) {
        const fs::path path = root / "LOCK";
        fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0) throw StoreError(system_error_text("cannot open", path));
        if (::flock(fd_, LOCK_EX | (wait ? 0 : LOCK_NB)) != 0) {
            ::close(fd_);
            fd_ = -1;
            throw ConflictError("store is locked by another writer");
        }
    }
    WriterLock(const WriterLock&) = delete;
    WriterLock& operator=(const WriterLock&) = delete;
    ~WriterLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }

private:
    int fd_ = -1;
};

DocumentStore::DocumentStore(fs::path root) : root_(std::move(root)) {
    ensure_directory(root_ / "collections");
    ensure_directory(root_ / "objects");
    ensure_directory(root_ / "revisions");
    try {
        WriterLock lock(root_);
        sweep_temporaries();
        write_manifest();
    } catch (const ConflictError&) {
        // Another writer is active; it owns cleanup.
    }
}

fs::path DocumentStore::document_path(const std::string& collection, const std::string& key) const {
    if (collection.empty() || key.empty()) throw StoreError("collection and key must be non-empty");
    return root_ / "collections" / encode_name(collection) / (encode_name(key) + std::string(kSuffix));
}

void DocumentStore::write_file(const fs::path& target, std::string_view bytes) const {
    ensure_directory(target.parent_path());
    const fs::path temp = target.string() + "." + std::to_string(::getpid()) + std::string(kTempSuffix);
    const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) throw StoreError(system_error_text("cannot create", temp));
    std::size_t written = 0;
    while (written < bytes.size()) {
        const ssize_t n = ::write(fd, bytes.data() + written, bytes.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            ::close(fd);
            throw StoreError(system_error_text("cannot write", temp));
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0) throw StoreError(system_error_text("cannot flush", temp));
    if (fault_hook_) fault_hook_("temp-written", target);
    if (::rename(temp.c_str(), target.c_str()) != 0) throw StoreError(system_error_text("cannot rename", temp));
    if (fault_hook_) fault_hook_("renamed", target);
}

void DocumentStore::sweep_temporaries() const {
    std::vector<fs::path> stray;
    for (const auto& entry : fs::recursive_directory_iterator(root_)) {
        if (entry.is_regular_file() && entry.path().filename().string().ends_with(kTempSuffix)) {
            stray.push_back(entry.path());
        }
    }
    for (const auto& path : stray) fs::remove(path);
}

void DocumentStore::write_manifest() const {
    Json listing = Json::object();
    for (const auto& name : collections()) {
        std::vector<std::string> keys;
        for (const auto& entry : fs::directory_iterator(root_ / "collections" / encode_name(name))) {
            if (is_document_file(entry)) keys.push_back(key_of_file(entry.path()));
        }
        std::sort(keys.begin(), keys.end());
        listing[name] = std::move(keys);
    }
    const Json manifest{{"collections", std::move(listing)}, {"revisions", list_revisions()}};
    write_file(root_ / "MANIFEST.json", canonical_json(manifest));
}

PutOutcome DocumentStore::classify(const PendingPut& put, bool force) const {
    const auto existing = find(put.collection, put.key);
    if (!existing) return PutOutcome::created;
    if (existing->body == put.body) return PutOutcome::unchanged;
    if (!force && !put.replace) throw ConflictError("conflicting document " + put.collection + "/" + put.key);
    return PutOutcome::replaced;
}

PutOutcome DocumentStore::put(const std::string& collection, const std::string& key, const Json& body, bool force) {
    const PendingPut single{collection, key, body};
    return put_all(std::span<const PendingPut>(&single, 1), force).front();
}

std::vector<PutOutcome> DocumentStore::put_all(std::span<const PendingPut> puts, bool force) {
    WriterLock lock(root_);
    return apply_locked(puts, force);
}

std::vector<PutOutcome> DocumentStore::transact(const Plan& plan, bool force) {
    WriterLock lock(root_);
    const auto puts = plan(*this);
    return apply_locked(puts, force);
}

std::vector<PutOutcome> DocumentStore::apply_locked(std::span<const PendingPut> puts, bool force) {
    std::vector<PutOutcome> outcomes;
    for (const auto& p : puts) {
        document_path(p.collection, p.key);
        outcomes.push_back(classify(p, force));
    }
    bool changed = false;
    for (std::size_t i = 0; i < puts.size(); ++i) {
        if (outcomes[i] == PutOutcome::unchanged) continue;
        write_file(document_path(puts[i].collection, puts[i].key), canonical_json(envelope(puts[i].key, puts[i].body)));
        changed = true;
    }
    if (changed) write_manifest();
    return outcomes;
}

std::optional<Document> DocumentStore::find(const std::string& collection, const std::string& key) const {
    const fs::path path = document_path(collection, key);
    if (!fs::exists(path)) return std::nullopt;
    const Json stored = Json::parse(read_file(path));
    return Document{collection, stored.at("key").get<std::string>(), stored.at("body")};
}

Document DocumentStore::get(const std::string& collection, const std::string& key) const {
    auto doc = find(collection, key);
    if (!doc) throw NotFoundError("no document " + collection + "/" + key);
    return *doc;
}

std::vector<Document> DocumentStore::query(const std::string& collection, std::string_view prefix,
                                           std::optional<std::int64_t> revision) const {
    std::vector<Document> out;
    if (revision) {
        const Json rev = load_revision(*revision);
        const auto it = rev.at("collections").find(collection);
        if (it == rev.at("collections").end()) return out;
        for (const auto& [key, hash] : it->items()) {
            if (key.starts_with(prefix)) out.push_back(read_at(*revision, collection, key));
        }
        return out;
    }
    const fs::path dir = root_ / "collections" / encode_name(collection);
    if (collection.empty() || !fs::is_directory(dir)) return out;
    std::map<std::string, fs::path> matches;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!is_document_file(entry)) continue;
        std::string key = key_of_file(entry.path());
        if (key.starts_with(prefix)) matches.emplace(std::move(key), entry.path());
    }
    for (const auto& [key, path] : matches) {
        const Json stored = Json::parse(read_file(path));
        out.push_back(Document{collection, key, stored.at("body")});
    }
    return out;
}

std::vector<std::string> DocumentStore::collections(std::optional<std::int64_t> revision) const {
    std::vector<std::string> out;
    if (revision) {
        for (const auto& [name, keys] : load_revision(*revision).at("collections").items()) out.push_back(name);
        return out;
    }
    for (const auto& entry : fs::directory_iterator(root_ / "collections")) {
        if (!entry.is_directory()) continue;
        const bool nonempty = std::any_of(fs::directory_iterator(entry.path()), fs::directory_iterator{},
                                          [](const fs::directory_entry& e) { return is_document_file(e); });
        if (nonempty) out.push_back(decode_name(entry.path().filename().string()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t DocumentStore::snapshot() {
    WriterLock lock(root_);
    Json frozen = Json::object();
    for (const auto& name : collections()) {
        Json hashes = Json::object();
        const fs::path dir = root_ / "collections" / encode_name(name);
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!is_document_file(entry)) continue;
            const std::string bytes = read_file(entry.path());
            const std::string hash = sha256_hex(bytes);
            const fs::path object = root_ / "objects" / (hash + std::string(kSuffix));
            if (!fs::exists(object)) write_file(object, bytes);
            hashes[key_of_file(entry.path())] = hash;
        }
        frozen[name] = std::move(hashes);
    }
    const auto existing = list_revisions();
    const std::int64_t revision = existing.empty() ? 1 : existing.back() + 1;
    write_file(root_ / "revisions" / (std::to_string(revision) + std::string(kSuffix)),
               canonical_json(Json{{"collections", std::move(frozen)}, {"revision", revision}}));
    write_manifest();
    return revision;
}

Json DocumentStore::load_revision(std::int64_t revision) const {
    const fs::path path = root_ / "revisions" / (std::to_string(revision) + std::string(kSuffix));
    if (revision <= 0 || !fs::exists(path)) throw NotFoundError("unknown revision " + std::to_string(revision));
    return Json::parse(read_file(path));
}

std::string DocumentStore::read_bytes_at(std::int64_t revision, const std::string& collection,
                                         const std::string& key) const {
    const Json rev = load_revision(revision);
    const Json& all = rev.at("collections");
    const auto coll = all.find(collection);
    if (coll == all.end() || !coll->contains(key)) {
        throw NotFoundError("no document " + collection + "/" + key + " at revision " + std::to_string(revision));
    }
    return read_file(root_ / "objects" / (coll->at(key).get<std::string>() + std::string(kSuffix)));
}

Document DocumentStore::read_at(std::int64_t revision, const std::string& collection, const std::string& key) const {
    const Json stored = Json::parse(read_bytes_at(revision, collection, key));
    return Document{collection, stored.at("key").get<std::string>(), stored.at("body")};
}

std::vector<std::int64_t> DocumentStore::list_revisions() const {
    std::vector<std::int64_t> out;
    for (const auto& entry : fs::directory_iterator(root_ / "revisions")) {
        if (auto r = parse_revision_name(entry.path()); r && entry.is_regular_file()) out.push_back(*r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace metarepo
