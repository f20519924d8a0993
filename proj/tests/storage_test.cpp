#include <gtest/gtest.h>

#include <unistd.h>

#include <random>

#include <nlohmann/json.hpp>

#include "cbpre/storage/proxy.hpp"

using namespace cbpre;
using namespace cbpre::storage;
namespace fs = std::filesystem;

namespace {

class StorageTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("cbpre-storage-" + std::to_string(::getpid()) + "-" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  pre::MessageBlock message(std::uint32_t t0) {
    pre::MessageBlock m;
    Bytes be;
    put_be32(be, t0);
    std::copy(be.begin(), be.end(), m.bytes.begin());
    return m;
  }

  Bytes ct(const pre::ProdKeyPair& kp, std::uint32_t t0) {
    return pre::serialize(g, pre::encrypt(pp, message(t0), kp, t0));
  }

  std::mt19937_64 rng{11};
  pre::ProdGroup g;
  std::pair<pre::ProdParams, pre::ProdMasterSecret> setup = pre::setup(g, rng);
  const pre::ProdParams& pp = setup.first;
  const pre::ProdMasterSecret& msk = setup.second;
  pre::ProdKeyPair sensor = pre::certified_keygen(pp, msk, pre::Identity{1}, rng);
  pre::ProdKeyPair requester = pre::certified_keygen(pp, msk, pre::Identity{0x80000001}, rng);
  fs::path dir;
};

}  // namespace

TEST_F(StorageTest, PutAssignsMonotoneIds) {
  RecordStore s(dir);
  EXPECT_EQ(s.put_record(pre::Identity{1}, ct(sensor, 100), std::nullopt, 0), 1u);
  EXPECT_EQ(s.put_record(pre::Identity{1}, ct(sensor, 101), Bytes{1, 2}, 1), 2u);
  try {
    s.put_record(pre::Identity{2}, ct(sensor, 102), std::nullopt, 2);
    FAIL();
  } catch (const StorageError& e) {
    EXPECT_EQ(e.code(), StorageErrc::IdMismatch);
  }
  auto bad = ct(sensor, 103);
  bad.pop_back();
  try {
    s.put_record(pre::Identity{1}, bad, std::nullopt, 2);
    FAIL();
  } catch (const StorageError& e) {
    EXPECT_EQ(e.code(), StorageErrc::MalformedCiphertext);
  }
  EXPECT_EQ(s.size(), 2u);
}

TEST_F(StorageTest, SurvivesRestart) {
  {
    RecordStore s(dir);
    s.put_record(pre::Identity{1}, ct(sensor, 100), Bytes{9}, 5.5);
  }
  RecordStore s(dir);
  auto rs = s.query_records(pre::Identity{1}, 0, UINT32_MAX);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0].record_id, 1u);
  EXPECT_EQ(rs[0].ciphertext, ct(sensor, 100));
  EXPECT_EQ(*rs[0].payload_ct, Bytes{9});
  EXPECT_EQ(rs[0].stored_at, 5.5);
  EXPECT_EQ(s.put_record(pre::Identity{1}, ct(sensor, 101), std::nullopt, 6), 2u);
}

TEST_F(StorageTest, QueryBoundariesAndEmpty) {
  RecordStore s(dir);
  for (std::uint32_t t : {100u, 105u, 110u}) s.put_record(pre::Identity{1}, ct(sensor, t), std::nullopt, 0);
  EXPECT_TRUE(s.query_records(pre::Identity{1}, 101, 104).empty());
  EXPECT_TRUE(s.query_records(pre::Identity{7}, 0, UINT32_MAX).empty());
  auto one = s.query_records(pre::Identity{1}, 105, 105);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].meta().t0, 105u);
  EXPECT_EQ(s.query_records(pre::Identity{1}, 100, 110).size(), 3u);
}

TEST_F(StorageTest, QueryMatchesLinearScan) {
  std::vector<pre::ProdKeyPair> sensors;
  for (std::uint32_t i = 1; i <= 3; ++i) sensors.push_back(pre::certified_keygen(pp, msk, pre::Identity{i}, rng));
  RecordStore s(dir);
  struct Row {
    std::uint64_t id;
    std::uint32_t sensor, t0;
  };
  std::vector<Row> all;
  std::uniform_int_distribution<std::uint32_t> t_d(0, 60), s_d(0, 2);
  for (int i = 0; i < 150; ++i) {
    auto k = s_d(rng);
    auto t = t_d(rng);
    auto id = s.put_record(sensors[k].id, ct(sensors[k], t), std::nullopt, i);
    all.push_back({id, sensors[k].id.value, t});
  }
  for (int q = 0; q < 500; ++q) {
    auto sid = 1 + s_d(rng);
    auto a = t_d(rng), b = t_d(rng);
    auto lo = std::min(a, b), hi = std::max(a, b);
    std::vector<std::uint64_t> expect;
    for (const auto& r : all) {
      if (r.sensor == sid && r.t0 >= lo && r.t0 <= hi) expect.push_back(r.id);
    }
    std::vector<std::uint64_t> got;
    for (const auto& r : s.query_records(pre::Identity{sid}, lo, hi)) got.push_back(r.record_id);
    ASSERT_EQ(got, expect) << sid << " [" << lo << "," << hi << "]";
  }
}

TEST_F(StorageTest, ApplyRekeyDeliversToRequester) {
  ProxyNode proxy(dir, 1);
  std::vector<std::uint32_t> times = {10, 11, 12};
  std::map<pre::Metadata, pre::ReEncKey> rks;
  for (auto t : times) {
    proxy.store().put_record(sensor.id, ct(sensor, t), std::nullopt, 0);
    pre::Metadata meta{sensor.id, t};
    rks[meta] = pre::rekey(pp, sensor, requester.id, requester.cert, meta);
  }
  auto records = proxy.store().query_records(sensor.id, 10, 12);
  const auto& share = proxy.apply_rekey(records, rks, requester.id, 100);
  EXPECT_EQ(share.share_id.size(), 32u);
  ASSERT_EQ(share.items.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& item = share.items[i].ct;
    auto c = pre::deserialize_ciphertext(g, records[i].ciphertext);
    EXPECT_EQ(item.C_B, rks[c.meta].bytes ^ c.C_A);
    EXPECT_EQ(pre::decrypt2(pp, item, requester, sensor.P_pub), message(times[i]));
  }
  auto fetched = proxy.fetch_share(share.share_id, 200);
  EXPECT_EQ(fetched.size(), 3u);

  auto manifest = nlohmann::json::parse(proxy.share_manifest(share.share_id));
  EXPECT_EQ(manifest["share_id"], share.share_id);
  ASSERT_EQ(manifest["items"].size(), 3u);
  auto item0 = pre::deserialize_reenc(g, from_hex(manifest["items"][0].get<std::string>()));
  EXPECT_EQ(item0, share.items[0].ct);
  EXPECT_EQ(manifest["ttl_s"], 3600.0);

  try {
    proxy.apply_rekey({}, pre::ReEncKey{}, requester.id, 0);
    FAIL();
  } catch (const StorageError& e) {
    EXPECT_EQ(e.code(), StorageErrc::EmptySelection);
  }
  rks.erase(rks.begin());
  EXPECT_THROW(proxy.apply_rekey(records, rks, requester.id, 0), StorageError);
}

TEST_F(StorageTest, SingleKeyCopyIsIdentity) {
  ProxyNode proxy(dir, 1);
  proxy.store().put_record(sensor.id, ct(sensor, 5), Bytes{7, 7}, 0);
  auto records = proxy.store().query_records(sensor.id, 5, 5);
  const auto& share = proxy.apply_rekey(records, pre::ReEncKey{}, requester.id, 0);
  EXPECT_EQ(share.items[0].ct.C_B, share.items[0].ct.C_A);
  EXPECT_EQ(*share.items[0].payload_ct, (Bytes{7, 7}));
}

TEST_F(StorageTest, ExpiryAndGc) {
  ProxyNode proxy(dir, 1, 100);
  EXPECT_EQ(proxy.gc_expired(1e9), 0u);
  proxy.store().put_record(sensor.id, ct(sensor, 5), std::nullopt, 0);
  auto records = proxy.store().query_records(sensor.id, 5, 5);
  auto old_id = proxy.apply_rekey(records, pre::ReEncKey{}, requester.id, 0).share_id;
  auto fresh_id = proxy.apply_rekey(records, pre::ReEncKey{}, requester.id, 50).share_id;
  EXPECT_NE(old_id, fresh_id);

  EXPECT_NO_THROW(proxy.fetch_share(old_id, 99.9));
  try {
    proxy.fetch_share(old_id, 100);
    FAIL();
  } catch (const StorageError& e) {
    EXPECT_EQ(e.code(), StorageErrc::Expired);
  }
  try {
    proxy.fetch_share("00112233445566778899aabbccddeeff", 0);
    FAIL();
  } catch (const StorageError& e) {
    EXPECT_EQ(e.code(), StorageErrc::UnknownShare);
  }
  EXPECT_EQ(proxy.gc_expired(120), 1u);
  EXPECT_EQ(proxy.gc_expired(120), 0u);
  EXPECT_NO_THROW(proxy.fetch_share(fresh_id, 120));
  EXPECT_THROW(proxy.fetch_share(old_id, 120), StorageError);
}
