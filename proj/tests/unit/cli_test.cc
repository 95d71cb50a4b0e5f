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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.h"
#include "photoveil/image.h"
#include "test_util.h"

namespace photoveil::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "photoveil");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> Lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

// Owner workspace: state, store, four images and their ROP fixture.
class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::TempDir("cli");
    SeededRandom rng(31);
    std::ofstream rop(dir_ / "rops.txt");
    rop << "# id x0 y0 x1 y1\n";
    for (int i = 0; i < 4; ++i) {
      GrayImage img(80, 64);
      const int lo = 30 * i, span = 40 + 20 * i;
      for (auto& p : img.pixels) p = static_cast<std::uint8_t>(lo + rng.UniformU64(span));
      const std::string id = "img" + std::to_string(i);
      WritePgm(dir_ / (id + ".pgm"), img);
      rop << id << " 10 8 58 50\n";
    }
    std::ofstream cfg(dir_ / "photoveil.conf");
    cfg << "# test config\nprime_bits = 256\nstate_dir = " << (dir_ / "state").string()
        << "\nlocal_store = " << (dir_ / "store").string() << "\n";
  }

  std::vector<std::string> Base() const {
    return {"--config", (dir_ / "photoveil.conf").string()};
  }
  Result Cmd(std::vector<std::string> args) const {
    std::vector<std::string> all = Base();
    all.insert(all.end(), args.begin(), args.end());
    return Invoke(all);
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  void Populate(const std::string& variant = "real") {
    ASSERT_EQ(Cmd({"keygen", "--owner", "alice", "--variant", variant, "--policy",
                   "AND(friend,OR(family,coworker))"})
                  .code,
              0);
    ASSERT_EQ(Cmd({"grant", "--user", "bob", "--attributes", "friend,family"}).code, 0);
    ASSERT_EQ(Cmd({"grant", "--user", "eve", "--attributes", "family,coworker"}).code, 0);
    const Result up = Cmd({"upload", "--owner", "alice", "--rop", Path("rops.txt"), Path("img0.pgm"),
                           Path("img1.pgm"), Path("img2.pgm"), Path("img3.pgm")});
    ASSERT_EQ(up.code, 0) << up.err;
    upload_out_ = up.out;
  }

  fs::path dir_;
  std::string upload_out_;
};

TEST_F(CliTest, EndToEndQueryAndRetrieve) {
  Populate();
  const auto up = Lines(upload_out_);
  ASSERT_EQ(up.size(), 4u);
  EXPECT_EQ(up[0].rfind("img0 public=", 0), 0u) << up[0];
  EXPECT_NE(up[0].find(" private="), std::string::npos);
  EXPECT_NE(up[0].find(" search="), std::string::npos);

  const Result q = Cmd({"query", "--creds", Path("state/credentials/bob.json"), "--owner", "alice",
                        "--image", Path("img2.pgm"), "--rop", Path("rops.txt"), "-k", "2", "--out",
                        Path("out")});
  ASSERT_EQ(q.code, 0) << q.err;
  const auto lines = Lines(q.out);
  ASSERT_GE(lines.size(), 3u);
  EXPECT_EQ(lines[0], "rank,image_id,score");
  EXPECT_EQ(lines[1].substr(0, 7), "1,img2,");
  EXPECT_EQ(lines[2].substr(0, 2), "2,");
  EXPECT_EQ(ReadFileBytes(dir_ / "out" / "img2.pgm"), ReadFileBytes(dir_ / "img2.pgm"));

  const Result r = Cmd({"retrieve", "--creds", Path("state/credentials/bob.json"), "--owner", "alice",
                        "--ids", "img1,img3", "-n", "3", "--out", Path("ret")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadFileBytes(dir_ / "ret" / "img1.pgm"), ReadFileBytes(dir_ / "img1.pgm"));
  EXPECT_EQ(ReadFileBytes(dir_ / "ret" / "img3.pgm"), ReadFileBytes(dir_ / "img3.pgm"));

  const Result missing = Cmd({"retrieve", "--creds", Path("state/credentials/bob.json"), "--owner",
                              "alice", "--ids", "img9"});
  EXPECT_EQ(missing.code, kExitProtocol);
}

TEST_F(CliTest, BinaryVariantAndClampedK) {
  const Result kg = Cmd({"keygen", "--owner", "alice", "--variant", "bin", "--policy", "friend"});
  ASSERT_EQ(kg.code, 0) << kg.err;
  EXPECT_NE(kg.out.find("K0, K1 and seed s"), std::string::npos) << kg.out;
  ASSERT_EQ(Cmd({"grant", "--user", "bob", "--attributes", "friend"}).code, 0);
  ASSERT_EQ(Cmd({"upload", "--owner", "alice", "--rop", Path("rops.txt"), "--method", "mask",
                 Path("img0.pgm"), Path("img1.pgm")})
                .code,
            0);
  const Result q = Cmd({"query", "--creds", Path("state/credentials/bob.json"), "--owner", "alice",
                        "--image", Path("img1.pgm"), "--rop", Path("rops.txt"), "-k", "5",
                        "--out", Path("out")});
  ASSERT_EQ(q.code, 0) << q.err;
  EXPECT_NE(q.err.find("clamped"), std::string::npos);
  const auto lines = Lines(q.out);
  EXPECT_EQ(lines[1].substr(0, 7), "1,img1,");
  EXPECT_EQ(ReadFileBytes(dir_ / "out" / "img1.pgm"), ReadFileBytes(dir_ / "img1.pgm"));
}

TEST_F(CliTest, AccessDeniedExitCode) {
  Populate();
  const Result q = Cmd({"query", "--creds", Path("state/credentials/eve.json"), "--owner", "alice",
                        "--image", Path("img0.pgm"), "--no-retrieve"});
  EXPECT_EQ(q.code, kExitAccessDenied);
  EXPECT_NE(q.err.find("ACCESS_DENIED"), std::string::npos);
  EXPECT_EQ(q.out.find("rank,"), std::string::npos);
}

TEST_F(CliTest, KeygenErrors) {
  const Result bad = Cmd({"keygen", "--owner", "alice", "--policy", "AND(friend,"});
  EXPECT_EQ(bad.code, kExitOther);
  EXPECT_NE(bad.err.find("INVALID_POLICY"), std::string::npos);
  EXPECT_NE(bad.err.find("11"), std::string::npos) << bad.err;
  ASSERT_EQ(Cmd({"keygen", "--owner", "alice", "--policy", "friend"}).code, 0);
  const Result again = Cmd({"keygen", "--owner", "alice", "--policy", "friend"});
  EXPECT_EQ(again.code, kExitOther);
  EXPECT_NE(again.err.find("EXISTING_KEYS"), std::string::npos);
  const auto perms = fs::status(dir_ / "state" / "owners" / "alice" / "keys.bin").permissions();
  EXPECT_EQ(perms & (fs::perms::group_all | fs::perms::others_all), fs::perms::none);
}

TEST_F(CliTest, UploadErrors) {
  ASSERT_EQ(Cmd({"keygen", "--owner", "alice", "--policy", "friend"}).code, 0);
  EXPECT_EQ(Cmd({"upload", "--owner", "alice", "--rop", Path("nope.txt"), Path("img0.pgm")}).code,
            kExitIo);
  EXPECT_EQ(Cmd({"upload", "--owner", "bob", "--rop", Path("rops.txt"), Path("img0.pgm")}).code,
            kExitProtocol);
  fs::copy_file(dir_ / "img0.pgm", dir_ / "unlisted.pgm");
  EXPECT_EQ(Cmd({"upload", "--owner", "alice", "--rop", Path("rops.txt"), Path("unlisted.pgm")}).code,
            kExitProtocol);
  EXPECT_EQ(Cmd({"upload", "--owner", "alice", "--rop", Path("rops.txt"), "--method", "dct",
                 Path("img0.pgm")})
                .code,
            kExitOther);
}

TEST_F(CliTest, SeededQueryIsReproducible) {
  Populate();
  const std::vector<std::string> q = {"--seed", "99", "query", "--creds",
                                      Path("state/credentials/bob.json"), "--owner", "alice",
                                      "--image", Path("img3.pgm"), "-k", "3", "--no-retrieve"};
  const Result a = Cmd(q), b = Cmd(q);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, BenchCsv) {
  const Result r = Invoke({"bench", "--variant", "real", "--dim", "8", "--trials", "2",
                        "--prime-bits", "256", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = Lines(r.out);
  ASSERT_EQ(lines[0], "operation,variant,dim,mean_ms,min_ms,max_ms");
  ASSERT_GE(lines.size(), 5u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::stringstream ss(lines[i]);
    std::vector<std::string> f;
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    ASSERT_EQ(f.size(), 6u) << lines[i];
    EXPECT_EQ(f[1], "real");
    EXPECT_EQ(f[2], "8");
    const double mean = std::stod(f[3]), lo = std::stod(f[4]), hi = std::stod(f[5]);
    EXPECT_GE(lo, 0.0);
    EXPECT_LE(lo, mean);
    EXPECT_LE(mean, hi);
  }
}

TEST(Cli, UsageErrors) {
  EXPECT_NE(Invoke({}).code, 0);
  EXPECT_NE(Invoke({"frobnicate"}).code, 0);
  EXPECT_NE(Invoke({"keygen"}).code, 0);
  EXPECT_EQ(Invoke({"--help"}).code, 0);
}

TEST(Cli, ExitCodeMapping) {
  EXPECT_EQ(ExitCodeFor(ErrorCode::kAccessDenied), 2);
  for (ErrorCode c : {ErrorCode::kProtocolViolation, ErrorCode::kMalformedRequest,
                      ErrorCode::kMalformedRecord, ErrorCode::kConflict, ErrorCode::kNotFound,
                      ErrorCode::kVariantMismatch, ErrorCode::kNoMatchingRow,
                      ErrorCode::kAuthFailure, ErrorCode::kKeyMismatch}) {
    EXPECT_EQ(ExitCodeFor(c), 3) << ErrorCodeName(c);
  }
  EXPECT_EQ(ExitCodeFor(ErrorCode::kIoError), 4);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kInvalidPolicy), 1);
}

}  // namespace
}  // namespace photoveil::cli
