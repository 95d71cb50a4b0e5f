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

#include "cli/cli.h"

#include <sys/stat.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/bench.h"
#include "cli/config.h"
#include "photoveil/access.h"
#include "photoveil/client.h"
#include "photoveil/service.h"
#include "photoveil/transport.h"
#include "photoveil/workflow.h"

namespace photoveil::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDefaultUniverse = "friend,family,coworker,public";

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto a = item.find_first_not_of(' ');
    const auto b = item.find_last_not_of(' ');
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

void WriteText(const fs::path& path, const std::string& text) {
  WriteFileBytes(path, AsBytes(text));
}

void WriteSecret(const fs::path& path, ByteSpan data) {
  WriteFileBytes(path, data);
  ::chmod(path.c_str(), 0600);
}

struct Connection {
  std::unique_ptr<CloudHost> host;
  std::unique_ptr<Transport> sharing;
  std::unique_ptr<Transport> search;
  std::unique_ptr<CloudClient> client;
};

class Context {
 public:
  Context(Config cfg, std::ostream& out, std::ostream& err)
      : cfg_(std::move(cfg)), out_(out), err_(err) {
    std::optional<std::uint64_t> seed;
    if (cfg_.Get("seed")) seed = cfg_.GetUint("seed", 0);
    rng_ = MakeRandom(seed);
  }

  Config& cfg() { return cfg_; }
  RandomSource& rng() { return *rng_; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

  fs::path state_dir() const { return cfg_.GetOr("state_dir", "photoveil-state"); }
  fs::path owner_dir(const std::string& owner) const {
    CheckName(owner, "owner id");
    return state_dir() / "owners" / owner;
  }
  fs::path authority_path() const {
    return cfg_.GetOr("authority_file", (state_dir() / "authority.json").string());
  }
  std::size_t threads() const { return cfg_.GetUint("threads", 1); }

  access::Authority LoadOrCreateAuthority() {
    const fs::path path = authority_path();
    if (fs::exists(path)) return access::Authority::Parse(ReadFileBytes(path));
    const std::vector<std::string> names = SplitList(cfg_.GetOr("universe", kDefaultUniverse));
    access::Authority authority(std::set<std::string>(names.begin(), names.end()), rng());
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    WriteSecret(path, authority.Serialize());
    err_ << "created attribute authority at " << path.string() << "\n";
    return authority;
  }

  Connection Connect() {
    Connection c;
    if (auto local = cfg_.Get("local_store")) {
      c.host = std::make_unique<CloudHost>(Role::kBoth, fs::path(*local), rng(), threads());
      c.sharing = std::make_unique<LoopbackTransport>(c.host->service());
      c.client = std::make_unique<CloudClient>(*c.sharing, *c.sharing);
      return c;
    }
    const std::string sharing = cfg_.GetOr("sharing", "127.0.0.1:7701");
    const std::string search = cfg_.GetOr("search", "127.0.0.1:7702");
    const Endpoint a = ParseEndpoint(sharing);
    c.sharing = std::make_unique<TcpTransport>(a.host, a.port);
    if (sharing == search) {
      c.client = std::make_unique<CloudClient>(*c.sharing, *c.sharing);
    } else {
      const Endpoint b = ParseEndpoint(search);
      c.search = std::make_unique<TcpTransport>(b.host, b.port);
      c.client = std::make_unique<CloudClient>(*c.sharing, *c.search);
    }
    return c;
  }

 private:
  Config cfg_;
  std::ostream& out_;
  std::ostream& err_;
  std::unique_ptr<RandomSource> rng_;
};

struct KeygenArgs {
  std::string owner;
  std::string variant = "real";
  std::string policy;
  std::size_t prime_bits = 0;
  std::size_t dim = kToyDim;
  bool force = false;
};

int Keygen(Context& ctx, const KeygenArgs& a) {
  const access::PolicyNode policy = access::ParsePolicy(a.policy);
  const fs::path dir = ctx.owner_dir(a.owner);
  if (fs::exists(dir / "keys.bin") && !a.force) {
    Fail(ErrorCode::kExistingKeys,
         "owner '" + a.owner + "' already has keys in " + dir.string() + " (use --force)");
  }
  KeygenOptions opts;
  opts.variant = ParseVariant(a.variant);
  opts.dim = a.dim;
  opts.prime_bits = a.prime_bits ? a.prime_bits : ctx.cfg().GetUint("prime_bits", 512);
  opts.allow_small_primes = ctx.cfg().GetUint("allow_small_primes", 0) != 0;
  const access::Authority authority = ctx.LoadOrCreateAuthority();
  const OwnerKeys keys = GenerateOwnerKeys(opts, ctx.rng());
  const Bytes payload = keys.Serialize();
  const Bytes envelope = authority.Wrap(policy, payload, ctx.rng()).Serialize();

  fs::create_directories(dir);
  WriteSecret(dir / "keys.bin", payload);
  WriteText(dir / "policy.txt", access::FormatPolicy(policy) + "\n");
  WriteFileBytes(dir / "envelope.json", envelope);

  Connection conn = ctx.Connect();
  conn.client->UploadEnvelope(a.owner, envelope);

  ctx.out() << "owner=" << a.owner << " variant=" << VariantName(keys.variant())
            << " modulus_bits=" << keys.pk().modulus_bits()
            << " envelope_bytes=" << envelope.size() << "\n";
  if (keys.variant() == Variant::kBinary) {
    ctx.out() << "wire labels K0, K1 and seed s generated\n";
  }
  return kExitOk;
}

struct GrantArgs {
  std::string user;
  std::string attributes;
  std::string out;
};

int Grant(Context& ctx, const GrantArgs& a) {
  const std::vector<std::string> names = SplitList(a.attributes);
  if (names.empty()) Fail(ErrorCode::kInvalidArgument, "grant needs at least one attribute");
  const access::Authority authority = ctx.LoadOrCreateAuthority();
  const access::CredentialSet creds =
      authority.IssueAll(a.user, std::set<std::string>(names.begin(), names.end()));
  CheckName(a.user, "user id");
  const fs::path out =
      a.out.empty() ? ctx.state_dir() / "credentials" / (a.user + ".json") : fs::path(a.out);
  if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
  WriteFileBytes(out, AsBytes(creds.ToJson()));
  ::chmod(out.c_str(), 0600);
  ctx.out() << "credentials for " << a.user << " (" << a.attributes << ") -> " << out.string()
            << "\n";
  return kExitOk;
}

struct UploadArgs {
  std::string owner;
  std::string rop;
  std::string method = "blur";
  int kernel = 0;
  std::string descriptor;
  std::string image_id;
  std::vector<std::string> images;
};

int Upload(Context& ctx, const UploadArgs& a) {
  const fs::path dir = ctx.owner_dir(a.owner);
  if (!fs::exists(dir / "keys.bin")) {
    Fail(ErrorCode::kNotFound, "no keys for owner '" + a.owner + "'; run keygen first");
  }
  if (a.images.size() > 1 && (!a.image_id.empty() || !a.descriptor.empty())) {
    Fail(ErrorCode::kInvalidArgument, "--image-id and --descriptor need a single image");
  }
  const OwnerKeys keys = OwnerKeys::Parse(ReadFileBytes(dir / "keys.bin"));
  const std::string policy_text = AsString(ReadFileBytes(dir / "policy.txt"));
  const access::PolicyNode policy =
      access::ParsePolicy(policy_text.substr(0, policy_text.find('\n')));
  const access::Authority authority = ctx.LoadOrCreateAuthority();
  const auto rops = ReadRopFixture(a.rop);

  UploadOptions opts;
  if (a.method == "mask") {
    opts.method = SeparationMethod::kMask;
  } else if (a.method == "blur") {
    opts.method = SeparationMethod::kBlur;
  } else {
    Fail(ErrorCode::kInvalidArgument, "--method must be mask or blur");
  }
  opts.kernel = a.kernel;
  opts.grid = static_cast<int>(ctx.cfg().GetUint("grid", 3));
  std::optional<Descriptor> desc;
  if (!a.descriptor.empty()) desc = ReadDescriptor(a.descriptor);

  Connection conn = ctx.Connect();
  for (const std::string& file : a.images) {
    const std::string id = a.image_id.empty() ? fs::path(file).stem().string() : a.image_id;
    auto rect = rops.find(id);
    if (rect == rops.end()) {
      Fail(ErrorCode::kNotFound, "ROP fixture " + a.rop + " has no entry for '" + id + "'");
    }
    const GrayImage img = ReadPgm(file);
    const PreparedImage prepared = PrepareImage(id, img, rect->second, keys, policy, authority,
                                                ctx.rng(), opts, desc ? &*desc : nullptr);
    conn.client->UploadImage(ToUpload(a.owner, prepared));
    ctx.out() << id << " public=" << prepared.public_bag.size()
              << " private=" << prepared.private_bag.size()
              << " search=" << prepared.search_bag.size() << "\n";
  }
  return kExitOk;
}

struct QueryArgs {
  std::string creds;
  std::string owner;
  std::string image;
  std::string descriptor;
  std::string rop;
  std::size_t k = 5;
  std::size_t n = 0;
  std::string out = "recovered";
  bool no_retrieve = false;
  std::string ids;  // retrieve only
};

void WriteRetrieved(Context& ctx, const std::vector<RetrievedImage>& images,
                    const fs::path& out_dir) {
  fs::create_directories(out_dir);
  for (const RetrievedImage& r : images) {
    const fs::path path = out_dir / (r.image_id + ".pgm");
    WritePgm(path, r.image);
    ctx.out() << "retrieved " << r.image_id << " -> " << path.string() << "\n";
  }
}

Descriptor QueryDescriptor(Context& ctx, const QueryArgs& a, Variant variant) {
  if (!a.descriptor.empty()) return ReadDescriptor(a.descriptor);
  GrayImage img = ReadPgm(a.image);
  if (!a.rop.empty()) {
    const auto rops = ReadRopFixture(a.rop);
    auto it = rops.find(fs::path(a.image).stem().string());
    if (it == rops.end()) {
      Fail(ErrorCode::kNotFound, "ROP fixture " + a.rop + " has no entry for " + a.image);
    }
    img = Crop(img, it->second);
  }
  return ToyExtract(img, static_cast<int>(ctx.cfg().GetUint("grid", 3)), variant);
}

int Query(Context& ctx, const QueryArgs& a) {
  if (a.image.empty() == a.descriptor.empty()) {
    Fail(ErrorCode::kInvalidArgument, "query needs exactly one of --image or --descriptor");
  }
  if (a.k == 0) Fail(ErrorCode::kInvalidArgument, "-k must be at least 1");
  const access::CredentialSet creds =
      access::CredentialSet::FromJson(AsString(ReadFileBytes(a.creds)));
  Connection conn = ctx.Connect();
  Querier querier(*conn.client, creds, ctx.rng());
  const OwnerKeys& keys = querier.Unlock(a.owner);
  const Descriptor query = QueryDescriptor(ctx, a, keys.variant());
  MatchThreshold alpha{ctx.cfg().GetDouble("alpha", 0.5)};
  const Bytes session = ctx.rng().RandomBytes(8);
  const SearchOutcome result = querier.Search(a.owner, query, a.k, alpha, "q-" + ToHex(session));
  if (result.clamped) {
    ctx.err() << "warning: k=" << a.k << " exceeds the owner's " << result.manifest.size()
              << " images; clamped\n";
  }
  ctx.out() << "rank,image_id,score\n";
  for (std::size_t i = 0; i < result.ranked.size(); ++i) {
    ctx.out() << i + 1 << "," << result.ranked[i].image_id << "," << result.ranked[i].score
              << "\n";
  }
  if (a.no_retrieve || result.ranked.empty()) return kExitOk;
  std::vector<std::size_t> indices;
  for (const SearchHit& h : result.ranked) indices.push_back(h.image_index);
  const std::size_t n = a.n ? a.n : 4 * indices.size();
  WriteRetrieved(ctx, querier.Retrieve(a.owner, indices, n), a.out);
  return kExitOk;
}

int Retrieve(Context& ctx, const QueryArgs& a) {
  const access::CredentialSet creds =
      access::CredentialSet::FromJson(AsString(ReadFileBytes(a.creds)));
  Connection conn = ctx.Connect();
  Querier querier(*conn.client, creds, ctx.rng());
  const std::vector<std::string>& manifest = querier.Manifest(a.owner);
  std::vector<std::size_t> indices;
  for (const std::string& id : SplitList(a.ids)) {
    auto it = std::find(manifest.begin(), manifest.end(), id);
    if (it == manifest.end()) {
      Fail(ErrorCode::kNotFound, "owner '" + a.owner + "' has no image '" + id + "'");
    }
    indices.push_back(static_cast<std::size_t>(it - manifest.begin()));
  }
  if (indices.empty()) Fail(ErrorCode::kInvalidArgument, "--ids is empty");
  const std::size_t n = a.n ? a.n : 4 * indices.size();
  WriteRetrieved(ctx, querier.Retrieve(a.owner, indices, n), a.out);
  return kExitOk;
}

struct BenchArgs {
  std::string variant = "real";
  std::size_t dim = 64;
  std::size_t trials = 5;
  std::size_t prime_bits = 0;
};

int Bench(Context& ctx, const BenchArgs& a) {
  BenchOptions opts;
  opts.variant = ParseVariant(a.variant);
  opts.dim = a.dim;
  opts.trials = a.trials;
  opts.prime_bits = a.prime_bits ? a.prime_bits : ctx.cfg().GetUint("prime_bits", 512);
  ctx.out() << BenchCsvHeader() << "\n";
  for (const BenchRow& row : RunBench(opts, ctx.rng())) {
    ctx.out() << FormatBenchRow(row) << "\n";
  }
  return kExitOk;
}

struct ServeArgs {
  std::string role;
  std::string host = "127.0.0.1";
  int port = -1;
  std::string store;
};

int Serve(Context& ctx, const ServeArgs& a) {
  const Role role = ParseRole(a.role);
  const std::uint16_t port =
      a.port >= 0 ? static_cast<std::uint16_t>(a.port)
                  : (role == Role::kSearch ? wire::kSearchPort : wire::kSharingPort);
  const fs::path store = a.store.empty() ? fs::path(ctx.cfg().GetOr("store_dir", ""))
                                         : fs::path(a.store);
  CloudHost host(role, store, ctx.rng(), ctx.threads());
  TcpServer server(host.service(), a.host, port);
  server.Start();
  ctx.out() << "serving " << RoleName(role) << " on " << a.host << ":" << server.port()
            << (store.empty() ? " (memory store)" : " (store " + store.string() + ")")
            << std::endl;
  server.Wait();
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAccessDenied:
      return kExitAccessDenied;
    case ErrorCode::kProtocolViolation:
    case ErrorCode::kMalformedRequest:
    case ErrorCode::kMalformedRecord:
    case ErrorCode::kConflict:
    case ErrorCode::kNotFound:
    case ErrorCode::kVariantMismatch:
    case ErrorCode::kNoMatchingRow:
    case ErrorCode::kAuthFailure:
    case ErrorCode::kKeyMismatch:
      return kExitProtocol;
    case ErrorCode::kIoError:
      return kExitIo;
    default:
      return kExitOther;
  }
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"photoveil: privacy-preserving photo sharing and search"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, state_dir, sharing, search, local_store;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  auto* config_opt = app.add_option("--config", config_path,
                                    "key=value config file (default: $PHOTOVEIL_CONFIG)");
  auto* seed_opt = app.add_option("--seed", seed, "deterministic randomness seed");
  auto* state_opt = app.add_option("--state", state_dir, "directory for keys and credentials");
  auto* sharing_opt = app.add_option("--sharing", sharing, "sharing cloud host:port");
  auto* search_opt = app.add_option("--search", search, "search cloud host:port");
  auto* local_opt = app.add_option("--local-store", local_store,
                                   "run both clouds in-process over this directory");
  auto* threads_opt = app.add_option("--threads", threads, "query worker threads");

  KeygenArgs keygen;
  auto* keygen_cmd = app.add_subcommand("keygen", "generate an owner's search keys");
  keygen_cmd->add_option("--owner", keygen.owner)->required();
  keygen_cmd->add_option("--variant", keygen.variant, "real or bin");
  keygen_cmd->add_option("--policy", keygen.policy, "e.g. AND(friend,OR(family,coworker))")
      ->required();
  keygen_cmd->add_option("--prime-bits", keygen.prime_bits);
  keygen_cmd->add_option("--dim", keygen.dim, "descriptor dimension (real variant)");
  keygen_cmd->add_flag("--force", keygen.force, "replace existing local keys");

  GrantArgs grant;
  auto* grant_cmd = app.add_subcommand("grant", "issue attribute credentials to a user");
  grant_cmd->add_option("--user", grant.user)->required();
  grant_cmd->add_option("--attributes", grant.attributes, "comma-separated")->required();
  grant_cmd->add_option("--out", grant.out, "credentials file");

  UploadArgs upload;
  auto* upload_cmd = app.add_subcommand("upload", "separate, encrypt and upload images");
  upload_cmd->add_option("--owner", upload.owner)->required();
  upload_cmd->add_option("--rop", upload.rop, "ROP fixture file")->required();
  upload_cmd->add_option("--method", upload.method, "mask or blur");
  upload_cmd->add_option("--kernel", upload.kernel, "blur kernel (odd, >= 3)");
  upload_cmd->add_option("--descriptor", upload.descriptor, "descriptor file");
  upload_cmd->add_option("--image-id", upload.image_id);
  upload_cmd->add_option("images", upload.images, "PGM files")->required();

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "search an owner's photos and fetch the top k");
  query_cmd->add_option("--creds", query.creds)->required();
  query_cmd->add_option("--owner", query.owner)->required();
  query_cmd->add_option("--image", query.image, "query PGM");
  query_cmd->add_option("--descriptor", query.descriptor, "query descriptor file");
  query_cmd->add_option("--rop", query.rop, "crop the query image to its ROP");
  query_cmd->add_option("-k", query.k, "results to return");
  query_cmd->add_option("-n", query.n, "retrieval superset size (default 4k)");
  query_cmd->add_option("--out", query.out, "directory for recovered images");
  query_cmd->add_flag("--no-retrieve", query.no_retrieve);

  QueryArgs retrieve;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "obliviously fetch and recover images");
  retrieve_cmd->add_option("--creds", retrieve.creds)->required();
  retrieve_cmd->add_option("--owner", retrieve.owner)->required();
  retrieve_cmd->add_option("--ids", retrieve.ids, "comma-separated image ids")->required();
  retrieve_cmd->add_option("-n", retrieve.n, "retrieval superset size (default 4k)");
  retrieve_cmd->add_option("--out", retrieve.out, "directory for recovered images");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "per-vector cost microbenchmarks as CSV");
  bench_cmd->add_option("--variant", bench.variant, "real or bin");
  bench_cmd->add_option("--dim", bench.dim);
  bench_cmd->add_option("--trials", bench.trials);
  bench_cmd->add_option("--prime-bits", bench.prime_bits);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "run a cloud endpoint");
  serve_cmd->add_option("--role", serve.role, "sharing, search or both")->required();
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("--port", serve.port);
  serve_cmd->add_option("--store", serve.store, "persistence directory (default: memory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitOther;
  }

  try {
    Config cfg;
    if (config_opt->count()) {
      cfg = Config::Load(config_path);
    } else if (const char* env = std::getenv("PHOTOVEIL_CONFIG"); env && *env) {
      cfg = Config::Load(env);
    }
    if (seed_opt->count()) cfg.Set("seed", std::to_string(seed));
    if (state_opt->count()) cfg.Set("state_dir", state_dir);
    if (sharing_opt->count()) cfg.Set("sharing", sharing);
    if (search_opt->count()) cfg.Set("search", search);
    if (local_opt->count()) cfg.Set("local_store", local_store);
    if (threads_opt->count()) cfg.Set("threads", std::to_string(threads));
    Context ctx(std::move(cfg), out, err);

    if (*keygen_cmd) return Keygen(ctx, keygen);
    if (*grant_cmd) return Grant(ctx, grant);
    if (*upload_cmd) return Upload(ctx, upload);
    if (*query_cmd) return Query(ctx, query);
    if (*retrieve_cmd) return Retrieve(ctx, retrieve);
    if (*bench_cmd) return Bench(ctx, bench);
    if (*serve_cmd) return Serve(ctx, serve);
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error [IO_ERROR]: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}

}  // namespace photoveil::cli
