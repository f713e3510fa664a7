#include "assertions.hpp"
#include "generators.hpp"

#include "metarepo/document_store.hpp"
#include "metarepo/error.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace metarepo {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;
using testing::thrown_message;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count_files(const fs::path& dir) {
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir)) n += e.is_regular_file() ? 1 : 0;
    return n;
}

std::vector<fs::path> temporaries(const fs::path& root) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file() && e.path().filename().string().find(".tmp") != std::string::npos) out.push_back(e.path());
    }
    return out;
}

Json random_json(std::mt19937_64& gen, int depth) {
    switch (gen() % (depth > 2 ? 4 : 6)) {
    case 0: return Json(static_cast<std::int64_t>(gen() % 2000) - 1000);
    case 1: return Json(static_cast<double>(gen() % 100000) / 64.0);
    case 2: return Json(std::string(1 + gen() % 5, static_cast<char>('a' + gen() % 26)));
    case 3: return Json(gen() % 2 == 0);
    case 4: {
        Json a = Json::array();
        for (std::size_t i = gen() % 4; i > 0; --i) a.push_back(random_json(gen, depth + 1));
        return a;
    }
    default: {
        Json o = Json::object();
        for (std::size_t i = gen() % 4; i > 0; --i) o[std::string(1, static_cast<char>('a' + gen() % 26))] = random_json(gen, depth + 1);
        return o;
    }
    }
}

// ---- canonical form ----

TEST(CanonicalJson, SortedCompactNewlineTerminated) {
    const Json body = Json::parse(R"({"b": [1, 2], "a": {"z": null, "y": "x"}})");
    EXPECT_EQ(canonical_json(body), "{\"a\":{\"y\":\"x\",\"z\":null},\"b\":[1,2]}\n");
}

TEST(CanonicalJson, FixedPoint) {
    std::mt19937_64 gen(1);
    for (int t = 0; t < 300; ++t) {
        const std::string once = canonical_json(random_json(gen, 0));
        EXPECT_EQ(canonical_json(Json::parse(once)), once);
    }
}

TEST(Names, EncodeDecodeRoundTrip) {
    EXPECT_EQ(encode_name("BP_1/weka_1_10"), "BP_1%2Fweka_1_10");
    EXPECT_EQ(encode_name(".hidden"), "%2Ehidden");
    EXPECT_EQ(encode_name("100%"), "100%25");
    std::mt19937_64 gen(2);
    for (int t = 0; t < 500; ++t) {
        std::string name;
        for (std::size_t i = 1 + gen() % 12; i > 0; --i) name.push_back(static_cast<char>(1 + gen() % 126));
        const std::string encoded = encode_name(name);
        EXPECT_EQ(encoded.find('/'), std::string::npos);
        EXPECT_NE(encoded.front(), '.');
        EXPECT_EQ(decode_name(encoded), name);
    }
}

TEST(Sha256, KnownDigest) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// ---- puts ----

TEST(DocumentStore, PutThenGet) {
    TempDir dir;
    DocumentStore store(dir.path());
    const Json body{{"kAN", 0.97}};
    EXPECT_EQ(store.put("iris", "meta_features", body), PutOutcome::created);
    EXPECT_EQ(store.get("iris", "meta_features").body, body);
    EXPECT_EQ(slurp(dir.path() / "collections" / "iris" / "meta_features.json"),
              canonical_json(Json{{"key", "meta_features"}, {"body", body}}));
}

TEST(DocumentStore, IdenticalPutIsIdempotent) {
    TempDir dir;
    DocumentStore store(dir.path());
    const Json body{{"x", 1}};
    store.put("c", "k", body);
    store.snapshot();
    const std::size_t objects = count_files(dir.path() / "objects");
    EXPECT_EQ(store.put("c", "k", body), PutOutcome::unchanged);
    store.snapshot();
    EXPECT_EQ(count_files(dir.path() / "objects"), objects);
}

TEST(DocumentStore, ConflictUnlessForced) {
    TempDir dir;
    DocumentStore store(dir.path());
    store.put("c", "k", Json{{"x", 1}});
    EXPECT_EQ(thrown_message<ConflictError>([&] { store.put("c", "k", Json{{"x", 2}}); }), "conflicting document c/k");
    EXPECT_EQ(store.get("c", "k").body, (Json{{"x", 1}}));
    EXPECT_EQ(store.put("c", "k", Json{{"x", 2}}, true), PutOutcome::replaced);
    EXPECT_EQ(store.get("c", "k").body, (Json{{"x", 2}}));
}

TEST(DocumentStore, PutAllChecksEverythingFirst) {
    TempDir dir;
    DocumentStore store(dir.path());
    store.put("c", "b", Json(1));
    const std::vector<PendingPut> puts{{"c", "a", Json(1)}, {"c", "b", Json(2)}};
    EXPECT_THROW(store.put_all(puts), ConflictError);
    EXPECT_FALSE(store.find("c", "a"));
}

TEST(DocumentStore, KeysNeedingEncoding) {
    TempDir dir;
    DocumentStore store(dir.path());
    store.put("iris", "BP_1/weka_1_10", Json(1));
    store.put("iris", ".dot", Json(2));
    const auto docs = store.query("iris");
    ASSERT_EQ(docs.size(), 2u);
    EXPECT_EQ(docs[0].key, ".dot");
    EXPECT_EQ(docs[1].key, "BP_1/weka_1_10");
}

TEST(DocumentStore, MissingDocument) {
    TempDir dir;
    DocumentStore store(dir.path());
    EXPECT_FALSE(store.find("c", "k"));
    EXPECT_THROW(store.get("c", "k"), NotFoundError);
}

// ---- queries ----

TEST(DocumentStore, PrefixQuery) {
    TempDir dir;
    DocumentStore store(dir.path());
    for (const char* key : {"BP_1/weka_1_10", "BP_2/weka_1_10", "C4.5_1/weka_1_10", "BP_10/weka_1_10"}) {
        store.put("iris", key, Json(key));
    }
    std::vector<std::string> keys;
    for (const auto& d : store.query("iris", "BP_")) keys.push_back(d.key);
    EXPECT_EQ(keys, (std::vector<std::string>{"BP_1/weka_1_10", "BP_10/weka_1_10", "BP_2/weka_1_10"}));
    EXPECT_EQ(store.query("iris").size(), 4u);
    EXPECT_TRUE(store.query("iris", "zzz").empty());
    EXPECT_TRUE(store.query("nothing", "").empty());
}

// ---- revisions ----

TEST(Snapshots, Isolation) {
    TempDir dir;
    DocumentStore store(dir.path());
    store.put("c", "a", Json(1));
    const auto r1 = store.snapshot();
    store.put("c", "b", Json(2));
    EXPECT_THROW(store.read_at(r1, "c", "b"), NotFoundError);
    EXPECT_EQ(store.read_at(r1, "c", "a").body, Json(1));
    EXPECT_THROW(store.read_at(r1 + 5, "c", "a"), NotFoundError);
    EXPECT_EQ(store.query("c", "", r1).size(), 1u);
}

TEST(Snapshots, ImmutableUnderLaterEdits) {
    TempDir dir;
    DocumentStore store(dir.path());
    std::mt19937_64 gen(4);
    std::vector<std::tuple<std::int64_t, std::string, std::string>> frozen;
    for (int round = 0; round < 15; ++round) {
        for (int p = 0; p < 5; ++p) {
            const std::string key = "k" + std::to_string(gen() % 6);
            store.put("c", key, random_json(gen, 0), true);
        }
        const auto r = store.snapshot();
        for (const auto& d : store.query("c")) frozen.emplace_back(r, d.key, store.read_bytes_at(r, "c", d.key));
    }
    for (const auto& [r, key, bytes] : frozen) EXPECT_EQ(store.read_bytes_at(r, "c", key), bytes);
    DocumentStore reopened(dir.path());
    for (const auto& [r, key, bytes] : frozen) EXPECT_EQ(reopened.read_bytes_at(r, "c", key), bytes);
}

TEST(Snapshots, RevisionsIncrease) {
    TempDir dir;
    DocumentStore store(dir.path());
    std::int64_t last = 0;
    for (int i = 0; i < 8; ++i) {
        store.put("c", "k" + std::to_string(i), Json(i));
        const auto r = store.snapshot();
        EXPECT_GT(r, last);
        last = r;
    }
    const auto revisions = store.list_revisions();
    EXPECT_EQ(revisions.size(), 8u);
    EXPECT_TRUE(std::is_sorted(revisions.begin(), revisions.end()));
    EXPECT_EQ(std::adjacent_find(revisions.begin(), revisions.end()), revisions.end());
}

TEST(Snapshots, ContentAddressed) {
    TempDir dir;
    DocumentStore store(dir.path());
    store.put("c", "a", Json(1));
    store.put("c", "b", Json(1));
    store.snapshot();
    EXPECT_EQ(count_files(dir.path() / "objects"), 2u);
    store.put("c", "a", Json(2), true);
    store.snapshot();
    store.put("c", "a", Json(1), true);
    store.snapshot();
    EXPECT_EQ(count_files(dir.path() / "objects"), 3u);
}

TEST(Manifest, ListsRevisionsAndKeys) {
    TempDir dir;
    DocumentStore store(dir.path());
    store.put("iris", "dataset", Json("x"));
    const auto r = store.snapshot();
    const Json manifest = Json::parse(slurp(dir.path() / "MANIFEST.json"));
    EXPECT_NE(manifest.dump().find("dataset"), std::string::npos);
    EXPECT_NE(manifest.dump().find(std::to_string(r)), std::string::npos);
}

// ---- crash safety ----

struct SimulatedCrash : std::runtime_error {
    SimulatedCrash() : std::runtime_error("crash") {}
};

TEST(CrashSafety, InterruptedWritesLeaveOldOrNewContent) {
    for (const char* stage : {"temp-written", "renamed"}) {
        for (int target = 0; target < 3; ++target) {
            TempDir dir;
            {
                DocumentStore store(dir.path());
                store.put("c", "a", Json{{"v", "old"}});
                int writes = 0;
                store.set_fault_hook([&](std::string_view s, const fs::path&) {
                    if (s == stage && writes++ == target) throw SimulatedCrash();
                });
                try {
                    const std::vector<PendingPut> puts{{"c", "a", Json{{"v", "new"}}, true}, {"c", "b", Json{{"v", "b"}}}};
                    store.put_all(puts);
                } catch (const SimulatedCrash&) {
                }
            }
            DocumentStore reopened(dir.path());
            EXPECT_TRUE(temporaries(dir.path()).empty()) << stage << target;
            const Json a = reopened.get("c", "a").body;
            EXPECT_TRUE(a == (Json{{"v", "old"}}) || a == (Json{{"v", "new"}})) << a.dump();
            if (const auto b = reopened.find("c", "b")) EXPECT_EQ(b->body, (Json{{"v", "b"}}));
            for (const auto& d : reopened.query("c")) EXPECT_NO_THROW(Json::parse(canonical_json(d.body)));
        }
    }
}

TEST(CrashSafety, SnapshotInterruptedBeforeRename) {
    TempDir dir;
    {
        DocumentStore store(dir.path());
        store.put("c", "a", Json(1));
        store.set_fault_hook([](std::string_view s, const fs::path& p) {
            if (s == "temp-written" && p.parent_path().filename() == "revisions") throw SimulatedCrash();
        });
        EXPECT_THROW(store.snapshot(), SimulatedCrash);
    }
    DocumentStore reopened(dir.path());
    EXPECT_TRUE(reopened.list_revisions().empty());
    EXPECT_EQ(reopened.snapshot(), 1);
}

// ---- locking ----

TEST(Locking, SecondWriterIsRefused) {
    TempDir dir;
    DocumentStore first(dir.path());
    DocumentStore second(dir.path());
    const auto message = thrown_message<ConflictError>([&] {
        first.transact([&](const DocumentStore&) {
            second.put("c", "k", Json(1));
            return std::vector<PendingPut>{};
        });
    });
    EXPECT_EQ(message, "store is locked by another writer");
    EXPECT_FALSE(first.find("c", "k"));
    EXPECT_EQ(second.put("c", "k", Json(1)), PutOutcome::created);
}

TEST(Locking, ReadsDoNotNeedTheLock) {
    TempDir dir;
    DocumentStore first(dir.path());
    first.put("c", "k", Json(1));
    DocumentStore reader(dir.path());
    first.transact([&](const DocumentStore&) {
        EXPECT_EQ(reader.get("c", "k").body, Json(1));
        EXPECT_EQ(reader.query("c").size(), 1u);
        return std::vector<PendingPut>{};
    });
}

} // namespace
} // namespace metarepo
