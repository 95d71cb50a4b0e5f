/*
 * Copyright 2026 The Photoveil Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <atomic>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "photoveil/access.h"
#include "photoveil/client.h"
#include "photoveil/service.h"
#include "photoveil/sharing_cloud.h"
#include "photoveil/search_cloud.h"
#include "photoveil/store.h"
#include "photoveil/transport.h"
#include "photoveil/wire.h"
#include "photoveil/workflow.h"
#include "test_util.h"

namespace photoveil {
namespace {

using testing::RandomDescriptor;
using testing::RandomImage;
using testing::TempDir;

// Keys, authority and policy for one owner; keys are cached per variant.
struct Owner {
  explicit Owner(Variant variant, const std::string& name = "alice")
      : id(name), keys(Keys(variant)), authority(Auth()), policy(access::ParsePolicy("OR(friend,family)")) {
    SeededRandom rng(11);
    envelope = authority.Wrap(policy, keys.Serialize(), rng).Serialize();
  }

  static const OwnerKeys& Keys(Variant v) {
    static const OwnerKeys real = [] {
      SeededRandom rng(21);
      return GenerateOwnerKeys({Variant::kReal, 16, 256}, rng);
    }();
    static const OwnerKeys bin = [] {
      SeededRandom rng(22);
      return GenerateOwnerKeys({Variant::kBinary, 16, 256}, rng);
    }();
    return v == Variant::kReal ? real : bin;
  }
  static const access::Authority& Auth() {
    static const access::Authority a = [] {
      SeededRandom rng(23);
      return access::Authority({"friend", "family", "coworker"}, rng);
    }();
    return a;
  }

  PreparedImage Prepare(const std::string& image_id, const Descriptor& d, RandomSource& rng) const {
    const GrayImage img = RandomImage(rng, 40, 30);
    return PrepareImage(image_id, img, {5, 4, 30, 25}, keys, policy, authority, rng, {}, &d);
  }

  std::string id;
  const OwnerKeys& keys;
  const access::Authority& authority;
  access::PolicyNode policy;
  Bytes envelope;
};

std::vector<BigInt> Distances(const wire::MatrixBlob& b, const OwnerKeys& keys) {
  return DecryptDistances(EncryptedDistanceMatrix::Parse(keys.pk(), b.image_index, b.rows, b.cols, b.data),
                          keys.sk());
}

BigInt PlainDistance(const FeatureVector& x, const FeatureVector& y) {
  if (x.variant() == Variant::kBinary) return BigInt(static_cast<unsigned long>(Hamming(x, y)));
  return EuclidSqFixed(x, y, FixedPointParams{});
}

// ---------------------------------------------------------------- wire

TEST(Wire, FrameRoundTrip) {
  wire::Message m{"QUERY", {{"z", 1}, {"a", "x"}}};
  const Bytes frame = wire::EncodeFrame(m);
  const std::string text(frame.begin() + 4, frame.end());
  EXPECT_EQ(text, R"({"body":{"a":"x","z":1},"type":"QUERY"})");
  EXPECT_EQ(frame[3], text.size());
  EXPECT_EQ(wire::DecodeFrame(frame), m);
  EXPECT_EQ(wire::EncodeFrame(wire::DecodeFrame(frame)), frame);
}

TEST(Wire, FrameErrors) {
  const Bytes frame = wire::EncodeFrame({"UPLOAD", {}});
  EXPECT_ERROR_CODE(wire::DecodeFrame(ByteSpan(frame).first(3)), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(wire::DecodeFrame(ByteSpan(frame).first(frame.size() - 1)),
                    ErrorCode::kParseError);
  EXPECT_ERROR_CODE(wire::DecodeBody("{"), ErrorCode::kParseError);
  Bytes huge = frame;
  huge[0] = 0xff;
  EXPECT_ERROR_CODE(wire::DecodeFrame(huge), ErrorCode::kProtocolViolation);
  EXPECT_ERROR_CODE(wire::DecodeBody(R"({"body":{}})"), ErrorCode::kProtocolViolation);
  EXPECT_ERROR_CODE(wire::DecodeBody(R"({"body":3,"type":"X"})"), ErrorCode::kProtocolViolation);
}

TEST(Wire, ErrorsTravelAsMessages) {
  const wire::Message e = wire::ErrorMessage(Error(ErrorCode::kAccessDenied, "nope"));
  EXPECT_EQ(e.type, "ERROR");
  EXPECT_EQ(e.body["code"], "ACCESS_DENIED");
  EXPECT_EQ(e.body["message"], "nope");
  EXPECT_ERROR_CODE(wire::ExpectType(e, wire::kUpload), ErrorCode::kAccessDenied);
  EXPECT_ERROR_CODE(wire::ExpectType({"QUERY_RESULT", {}}, wire::kUpload), ErrorCode::kProtocolViolation);
  EXPECT_NO_THROW(wire::ExpectType({"UPLOAD", {}}, wire::kUpload));
}

TEST(Wire, TypedBodies) {
  const wire::QueryJob job{"s1", "alice", Variant::kBinary, {1, 2, 3}};
  const wire::QueryJob back = wire::ParseQuery(wire::MakeQuery(job).body);
  EXPECT_EQ(back.session_id, "s1");
  EXPECT_EQ(back.owner_id, "alice");
  EXPECT_EQ(back.variant, Variant::kBinary);
  EXPECT_EQ(back.encoding, job.encoding);

  const std::vector<wire::MatrixBlob> blobs = {{0, 2, 3, {9}}, {1, 4, 3, {8, 7}}};
  EXPECT_EQ(wire::ParseQueryResult(wire::QueryResultBody("s1", blobs)), blobs);

  const wire::EnvelopeReply reply{{5, 6}, {"a", "b"}};
  const wire::EnvelopeReply rb = wire::ParseEnvelopeReply(wire::EnvelopeReplyBody(reply));
  EXPECT_EQ(rb.envelope, reply.envelope);
  EXPECT_EQ(rb.manifest, reply.manifest);

  const ot::OtRequest req{{1, 4}, {BigInt(12345)}};
  std::string owner;
  const ot::OtRequest rq = wire::ParseOtRequest(wire::MakeOtRequest("bob", req).body, &owner);
  EXPECT_EQ(owner, "bob");
  EXPECT_EQ(rq.sigma_prime, req.sigma_prime);
  EXPECT_EQ(rq.blinded, req.blinded);

  const ot::OtResponse resp{BigInt(77), {1, 4}, {{{1}, {2}}}, {{3}, {4}}};
  const ot::OtResponse rr = wire::ParseOtResponse(wire::OtResponseBody(resp));
  EXPECT_EQ(rr.y_pub, resp.y_pub);
  EXPECT_EQ(rr.key_tables, resp.key_tables);
  EXPECT_EQ(rr.items, resp.items);
  EXPECT_ERROR_CODE(wire::ParseQuery(wire::Json{{"owner", "x"}}), ErrorCode::kProtocolViolation);
}

// ---------------------------------------------------------------- store

class StoreTest : public ::testing::TestWithParam<bool> {
 protected:
  void SetUp() override {
    if (GetParam()) {
      dir_ = TempDir("store");
      store_ = std::make_unique<DirectoryStore>(dir_);
    } else {
      store_ = std::make_unique<MemoryStore>();
    }
  }
  std::filesystem::path dir_;
  std::unique_ptr<Store> store_;
};

TEST_P(StoreTest, EnvelopeAndImages) {
  Store& s = *store_;
  EXPECT_FALSE(s.HasOwner("alice"));
  EXPECT_FALSE(s.GetEnvelope("alice"));
  EXPECT_TRUE(s.PutEnvelope("alice", Bytes{1, 2}));
  EXPECT_TRUE(s.PutEnvelope("alice", Bytes{1, 2}));
  EXPECT_FALSE(s.PutEnvelope("alice", Bytes{1, 3}));
  EXPECT_EQ(*s.GetEnvelope("alice"), (Bytes{1, 2}));
  EXPECT_TRUE(s.ImageIds("alice").empty());

  const std::map<std::string, Bytes> a = {{"public", {1}}, {"private", {2}}};
  EXPECT_TRUE(s.PutImage("alice", "img.b", a));
  EXPECT_TRUE(s.PutImage("alice", "img", {{"public", {3}}, {"private", {4}}}));
  EXPECT_TRUE(s.PutImage("alice", "img.b", a));
  EXPECT_FALSE(s.PutImage("alice", "img.b", {{"public", {1}}, {"private", {9}}}));
  EXPECT_EQ(s.ImageIds("alice"), (std::vector<std::string>{"img.b", "img"}));
  EXPECT_EQ(*s.GetBag("alice", "img", "private"), Bytes{4});
  EXPECT_FALSE(s.GetBag("alice", "img", "search"));
  EXPECT_FALSE(s.GetBag("alice", "nope", "public"));
}

TEST_P(StoreTest, RandomBlobsRoundTrip) {
  SeededRandom rng(1);
  std::vector<Bytes> blobs;
  for (int i = 0; i < 20; ++i) {
    blobs.push_back(rng.RandomBytes(rng.UniformU64(5000)));
    ASSERT_TRUE(store_->PutImage("o", "i" + std::to_string(i), {{"search", blobs.back()}}));
  }
  for (int i = 0; i < 20; ++i) EXPECT_EQ(*store_->GetBag("o", "i" + std::to_string(i), "search"), blobs[i]);
}

INSTANTIATE_TEST_SUITE_P(Backends, StoreTest, ::testing::Values(false, true),
                         [](const auto& info) { return info.param ? "Directory" : "Memory"; });

TEST(Store, DirectoryPersistsAcrossInstances) {
  const auto dir = TempDir("persist");
  {
    DirectoryStore s(dir);
    s.PutEnvelope("alice", Bytes{7});
    s.PutImage("alice", "x", {{"public", {1}}});
  }
  DirectoryStore s(dir);
  EXPECT_EQ(*s.GetEnvelope("alice"), Bytes{7});
  EXPECT_EQ(s.ImageIds("alice"), std::vector<std::string>{"x"});
  EXPECT_TRUE(std::filesystem::exists(dir / "alice" / "x.public"));
}

TEST(Store, NamesAreChecked) {
  for (const char* bad : {"", ".hidden", "a/b", "..", "a b", "x\n"}) {
    EXPECT_ERROR_CODE(CheckName(bad, "id"), ErrorCode::kMalformedRecord);
  }
  EXPECT_NO_THROW(CheckName("img-01_a.b", "id"));
}

// ---------------------------------------------------------------- sharing cloud

TEST(SharingCloud, EnvelopeLifecycle) {
  MemoryStore store;
  SharingCloud cloud(store);
  EXPECT_ERROR_CODE(cloud.FetchEnvelope("alice"), ErrorCode::kNotFound);
  cloud.UploadEnvelope("alice", Bytes{1, 2, 3});
  EXPECT_NO_THROW(cloud.UploadEnvelope("alice", Bytes{1, 2, 3}));
  EXPECT_ERROR_CODE(cloud.UploadEnvelope("alice", Bytes{1, 2, 4}), ErrorCode::kConflict);
  EXPECT_ERROR_CODE(cloud.UploadEnvelope("../etc", Bytes{1}), ErrorCode::kMalformedRecord);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(cloud.FetchEnvelope("alice").envelope, (Bytes{1, 2, 3}));
}

TEST(SharingCloud, ImagesAndRetrieval) {
  SeededRandom rng(2);
  const Owner o(Variant::kReal);
  MemoryStore store;
  SharingCloud cloud(store);
  cloud.UploadEnvelope(o.id, o.envelope);
  std::vector<PreparedImage> imgs;
  for (int i = 0; i < 4; ++i) {
    imgs.push_back(o.Prepare("p" + std::to_string(i), RandomDescriptor(rng, Variant::kReal, 3, 16), rng));
    cloud.UploadImage(o.id, imgs.back().image_id, imgs.back().public_bag, imgs.back().private_bag);
  }
  EXPECT_EQ(cloud.FetchEnvelope(o.id).manifest, (std::vector<std::string>{"p0", "p1", "p2", "p3"}));
  EXPECT_ERROR_CODE(cloud.UploadImage(o.id, "p1", imgs[2].public_bag, imgs[1].private_bag),
                    ErrorCode::kConflict);
  EXPECT_ERROR_CODE(cloud.UploadImage(o.id, "bad", Bytes{1, 2}, imgs[1].private_bag),
                    ErrorCode::kMalformedRecord);
  EXPECT_ERROR_CODE(cloud.UploadImage(o.id, "bad", imgs[1].public_bag, Bytes{1, 2}),
                    ErrorCode::kMalformedRecord);
  EXPECT_ERROR_CODE(cloud.UploadImage(o.id, "bad", {}, {}), ErrorCode::kMalformedRecord);

  const ot::Receiver rx(ot::DefaultGroup(), ot::OtChoice{{2}, {0, 2, 3}}, 4, rng);
  const auto items = rx.Finalize(cloud.Retrieve(o.id, rx.request(), rng));
  EXPECT_EQ(items[0], PackRetrievalItem(imgs[2].public_bag, imgs[2].private_bag));
  const auto [pub, priv] = UnpackRetrievalItem(items[0]);
  EXPECT_EQ(pub, imgs[2].public_bag);
  EXPECT_EQ(priv, imgs[2].private_bag);

  ot::OtRequest req = rx.request();
  req.sigma_prime = {0, 2, 4};
  EXPECT_ERROR_CODE(cloud.Retrieve(o.id, req, rng), ErrorCode::kNotFound);
  EXPECT_ERROR_CODE(cloud.Retrieve("nobody", rx.request(), rng), ErrorCode::kNotFound);
}

// ---------------------------------------------------------------- search cloud

TEST(SearchCloud, ZeroImageOwnerAndUnknownOwner) {
  const Owner o(Variant::kReal);
  MemoryStore store;
  SearchCloud cloud(store);
  const wire::QueryJob job{"s", o.id, Variant::kReal, {}};
  EXPECT_ERROR_CODE(cloud.ExecuteQuery(job), ErrorCode::kNotFound);
  cloud.RegisterOwner(o.id, o.envelope);
  EXPECT_TRUE(cloud.ExecuteQuery(job).empty());
}

TEST(SearchCloud, ThreeImageOracle) {
  SeededRandom rng(3);
  for (Variant v : {Variant::kReal, Variant::kBinary}) {
    const Owner o(v);
    MemoryStore store;
    SearchCloud cloud(store, 2);
    cloud.RegisterOwner(o.id, o.envelope);
    std::vector<Descriptor> X;
    for (int i = 0; i < 3; ++i) {
      X.push_back(RandomDescriptor(rng, v, 2 + i, 16));
      const PreparedImage p = o.Prepare("img" + std::to_string(i), X.back(), rng);
      cloud.UploadSearchBag(o.id, p.image_id, p.search_bag);
    }
    const Descriptor Y = RandomDescriptor(rng, v, 3, 16);
    wire::QueryJob job{"s", o.id, v, {}};
    if (v == Variant::kReal) {
      const auto& rk = o.keys.real();
      job.encoding = real::QuerierEncode(Y, rk.pk, rk.r, rk.fixed, rng).Serialize(rk.pk);
    } else {
      job.encoding = bin::EncodeQueryDescriptor(Y, o.keys.bin()).Serialize();
    }
    const auto blobs = cloud.ExecuteQuery(job);
    ASSERT_EQ(blobs.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(blobs[i].image_index, i);
      ASSERT_EQ(blobs[i].rows, X[i].size());
      ASSERT_EQ(blobs[i].cols, 3u);
      const auto d = Distances(blobs[i], o.keys);
      for (std::size_t r = 0; r < X[i].size(); ++r)
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(d[r * 3 + c], PlainDistance(X[i][r], Y[c]));
    }
    // Same bags, same query: identical decrypted output on a repeat run.
    const auto again = cloud.ExecuteQuery(job);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(Distances(again[i], o.keys), Distances(blobs[i], o.keys));

    job.variant = v == Variant::kReal ? Variant::kBinary : Variant::kReal;
    EXPECT_ERROR_CODE(cloud.ExecuteQuery(job), ErrorCode::kVariantMismatch);
  }
}

TEST(SearchCloud, OrderFollowsUploadNotContent) {
  SeededRandom rng(4);
  const Owner o(Variant::kBinary);
  MemoryStore store;
  SearchCloud cloud(store, 3);
  cloud.RegisterOwner(o.id, o.envelope);
  const Descriptor Y = RandomDescriptor(rng, Variant::kBinary, 2, 16);
  // Uploaded in an order unrelated to id or distance.
  const std::vector<std::string> ids = {"zeta", "alpha", "mid", "beta", "omega"};
  for (const auto& id : ids) {
    const PreparedImage p = o.Prepare(id, rng.Coin() ? Y : RandomDescriptor(rng, Variant::kBinary, 2, 16), rng);
    cloud.UploadSearchBag(o.id, id, p.search_bag);
  }
  const auto blobs = cloud.ExecuteQuery({"s", o.id, Variant::kBinary, bin::EncodeQueryDescriptor(Y, o.keys.bin()).Serialize()});
  ASSERT_EQ(blobs.size(), ids.size());
  for (std::size_t i = 0; i < blobs.size(); ++i) EXPECT_EQ(blobs[i].image_index, i);
  EXPECT_EQ(store.ImageIds(o.id), ids);
}

TEST(SearchCloud, RejectsBadBags) {
  SeededRandom rng(5);
  const Owner real_owner(Variant::kReal), bin_owner(Variant::kBinary);
  MemoryStore store;
  SearchCloud cloud(store);
  cloud.RegisterOwner("alice", real_owner.envelope);
  const PreparedImage r = real_owner.Prepare("r", RandomDescriptor(rng, Variant::kReal, 2, 16), rng);
  const PreparedImage b = bin_owner.Prepare("b", RandomDescriptor(rng, Variant::kBinary, 2, 16), rng);
  cloud.UploadSearchBag("alice", "r", r.search_bag);
  EXPECT_ERROR_CODE(cloud.UploadSearchBag("alice", "b", b.search_bag), ErrorCode::kMalformedRecord);
  EXPECT_ERROR_CODE(cloud.UploadSearchBag("alice", "x", Bytes{0, 1, 2}), ErrorCode::kMalformedRecord);
  EXPECT_ERROR_CODE(cloud.UploadSearchBag("alice", "x", {}), ErrorCode::kMalformedRecord);
  SeededRandom other(6);
  const OwnerKeys k2 = GenerateOwnerKeys({Variant::kReal, 16, 256}, other);
  const Descriptor d2 = RandomDescriptor(rng, Variant::kReal, 2, 16);
  const PreparedImage r2 = PrepareImage("r2", RandomImage(rng, 40, 30), {5, 4, 30, 25}, k2,
                                        real_owner.policy, real_owner.authority, rng, {}, &d2);
  EXPECT_ERROR_CODE(cloud.UploadSearchBag("alice", "r2", r2.search_bag), ErrorCode::kMalformedRecord);
  EXPECT_ERROR_CODE(cloud.UploadSearchBag("alice", "r", b.search_bag), ErrorCode::kConflict);
}

// ---------------------------------------------------------------- service + transports

TEST(Service, RoleRoutingAndErrors) {
  SeededRandom rng(7);
  CloudHost sharing(Role::kSharing, {}, rng);
  CloudHost search(Role::kSearch, {}, rng);
  auto code = [](const wire::Message& m) { return m.body.value("code", std::string()); };
  EXPECT_EQ(code(sharing.service().Handle({"QUERY", {}})), "PROTOCOL_VIOLATION");
  EXPECT_EQ(code(search.service().Handle({"OT_REQUEST", {}})), "PROTOCOL_VIOLATION");
  EXPECT_EQ(code(search.service().Handle({"BOGUS", {}})), "PROTOCOL_VIOLATION");
  EXPECT_EQ(code(search.service().Handle({"UPLOAD", {{"kind", "envelope"}}})), "MALFORMED_RECORD");
  EXPECT_EQ(code(sharing.service().Handle({"FETCH_ENVELOPE", {{"owner", "nobody"}}})), "NOT_FOUND");
  const Owner o(Variant::kReal);
  wire::UploadImage up{o.id, "x", {}, {}, {1, 2}};
  sharing.service().Handle(wire::MakeUploadEnvelope(o.id, o.envelope));
  EXPECT_EQ(code(sharing.service().Handle(wire::MakeUploadImage(up))), "MALFORMED_RECORD");
  EXPECT_EQ(ParseRole("both"), Role::kBoth);
  EXPECT_ERROR_CODE(ParseRole("all"), ErrorCode::kInvalidArgument);
}

// Full lifecycle through a client; returns the ranked ids.
void RunLifecycle(CloudClient& client, Variant v, RandomSource& rng) {
  const Owner o(v, "owner-" + std::string(VariantName(v)));
  client.UploadEnvelope(o.id, o.envelope);
  std::vector<Descriptor> X;
  std::vector<GrayImage> originals;
  for (int i = 0; i < 4; ++i) {
    X.push_back(RandomDescriptor(rng, v, 4, 16));
    const GrayImage img = RandomImage(rng, 40, 30);
    originals.push_back(img);
    const PreparedImage p = PrepareImage("img" + std::to_string(i), img, {5, 4, 30, 25}, o.keys,
                                         o.policy, o.authority, rng, {}, &X.back());
    client.UploadImage(ToUpload(o.id, p));
  }
  Querier bob(client, o.authority.IssueAll("bob", {"friend"}), rng);
  const SearchOutcome out = bob.Search(o.id, X[2], 2);
  ASSERT_EQ(out.ranked.size(), 2u);
  EXPECT_EQ(out.ranked[0].image_id, "img2");
  EXPECT_EQ(out.ranked[0].score, 4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(out.scores[i], Similarity(X[i], X[2], {0.5}));
  const auto got = bob.Retrieve(o.id, {out.ranked[0].image_index, 0}, 3);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].image, originals[2]);
  EXPECT_EQ(got[1].image, originals[0]);
  EXPECT_TRUE(bob.Search(o.id, X[1], 10).clamped);

  Querier eve(client, o.authority.IssueAll("eve", {"coworker"}), rng);
  EXPECT_ERROR_CODE(eve.Search(o.id, X[2], 1), ErrorCode::kAccessDenied);
}

TEST(Transport, LoopbackSplitClouds) {
  SeededRandom rng(8);
  CloudHost sharing(Role::kSharing, {}, rng);
  CloudHost search(Role::kSearch, {}, rng);
  LoopbackTransport ts(sharing.service()), tq(search.service());
  CloudClient client(ts, tq);
  RunLifecycle(client, Variant::kReal, rng);
  RunLifecycle(client, Variant::kBinary, rng);
}

TEST(Transport, CombinedCloudSendsOneUpload) {
  SeededRandom rng(9);
  CloudHost both(Role::kBoth, TempDir("both"), rng);
  LoopbackTransport t(both.service(), /*record=*/true);
  CloudClient client(t, t);
  const Owner o(Variant::kBinary);
  client.UploadEnvelope(o.id, o.envelope);
  EXPECT_EQ(t.frames().size(), 2u);
  const PreparedImage p = o.Prepare("one", RandomDescriptor(rng, Variant::kBinary, 2, 16), rng);
  client.UploadImage(ToUpload(o.id, p));
  EXPECT_EQ(t.frames().size(), 4u);
  EXPECT_EQ(client.FetchEnvelope(o.id).manifest, std::vector<std::string>{"one"});
}

TEST(Transport, DirectoryBackedRestart) {
  SeededRandom rng(10);
  const auto root = TempDir("restart");
  const Owner o(Variant::kReal);
  {
    CloudHost host(Role::kBoth, root, rng);
    LoopbackTransport t(host.service());
    CloudClient client(t, t);
    client.UploadEnvelope(o.id, o.envelope);
    client.UploadImage(ToUpload(o.id, o.Prepare("a", RandomDescriptor(rng, Variant::kReal, 2, 16), rng)));
  }
  EXPECT_TRUE(std::filesystem::exists(root / "sharing" / o.id / "envelope"));
  EXPECT_TRUE(std::filesystem::exists(root / "search" / o.id / "a.search"));
  CloudHost host(Role::kBoth, root, rng);
  LoopbackTransport t(host.service());
  CloudClient client(t, t);
  EXPECT_EQ(client.FetchEnvelope(o.id).manifest, std::vector<std::string>{"a"});
}

TEST(Transport, TcpEndToEndAndConcurrentQueries) {
  SeededRandom rng(12);
  CloudHost sharing(Role::kSharing, {}, rng);
  CloudHost search(Role::kSearch, {}, rng, 2);
  TcpServer s1(sharing.service(), "127.0.0.1", 0), s2(search.service(), "127.0.0.1", 0);
  s1.Start();
  s2.Start();
  TcpTransport ts("127.0.0.1", s1.port()), tq("127.0.0.1", s2.port());
  CloudClient client(ts, tq);
  RunLifecycle(client, Variant::kBinary, rng);

  const Owner o(Variant::kBinary, "owner-binary");
  const Descriptor Y = RandomDescriptor(rng, Variant::kBinary, 2, 16);
  const Bytes enc = bin::EncodeQueryDescriptor(Y, o.keys.bin()).Serialize();
  std::atomic<int> ok{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] {
      TcpTransport t("127.0.0.1", s2.port());
      const wire::Message reply =
          t.Call(wire::MakeQuery({"s" + std::to_string(i), o.id, Variant::kBinary, enc}));
      if (reply.type == wire::kQueryResult && wire::ParseQueryResult(reply.body).size() == 4) ++ok;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 4);
  s1.Stop();
  s2.Stop();
  TcpTransport dead("127.0.0.1", s1.port());
  EXPECT_ERROR_CODE(dead.Call({"FETCH_ENVELOPE", {{"owner", "x"}}}), ErrorCode::kIoError);
}

}  // namespace
}  // namespace photoveil
