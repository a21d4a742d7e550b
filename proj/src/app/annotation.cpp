#include "laughboard/app/annotation.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>
#include <openssl/rand.h>

#include "laughboard/core/errors.hpp"
#include "laughboard/core/random.hpp"

namespace laughboard::app::annotation {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSampleStream = 0x5a3e;
constexpr std::uint64_t kUnitIdStream = 0x0417;
constexpr std::uint64_t kSwapStream = 0x5a4f;
constexpr std::uint64_t kOrderStream = 0x0bde;

std::string hex(std::uint64_t x, int digits) { return fmt::format("{:0{}x}", x, 16).substr(16 - digits); }

std::string random_token() {
  unsigned char bytes[16];
  if (RAND_bytes(bytes, sizeof bytes) != 1) throw Error("no randomness for a session id");
  std::string out;
  for (unsigned char b : bytes) out += fmt::format("{:02x}", b);
  return out;
}

}  // namespace

std::vector<AnnotationUnit> sample_units(const MatchHistoryGraph& graph, const Dataset& dataset,
                                         std::size_t sample_size, std::uint64_t seed) {
  std::vector<std::size_t> eligible;
  const auto records = graph.records();
  for (std::size_t pos = 0; pos < records.size(); ++pos) {
    if (graph.is_active(pos) && records[pos].score_for_a != 0.5) eligible.push_back(pos);
  }
  if (eligible.size() < sample_size) {
    throw ValidationError(fmt::format("the ledger has {} decisive records; cannot sample {}", eligible.size(), sample_size));
  }
  rng::Engine engine(rng::derive_seed(seed, kSampleStream));
  rng::shuffle(eligible, engine);
  eligible.resize(sample_size);

  std::vector<AnnotationUnit> out;
  std::set<std::string> ids;
  for (std::size_t pos : eligible) {
    const MatchRecord& r = records[pos];
    AnnotationUnit u;
    u.match_id = r.match_id;
    u.unit_id = "u" + hex(rng::derive_seed(seed, kUnitIdStream, static_cast<std::uint64_t>(r.match_id)), 12);
    if (!ids.insert(u.unit_id).second) throw Error("unit id collision; pick another seed");
    u.model_a = r.side_a_model;
    u.model_b = r.side_b_model;
    u.headline = graph.prompt(graph.require_prompt(r.prompt_id)).text;
    u.joke_a = dataset.generation(r.side_a_model, r.prompt_id).text;
    u.joke_b = dataset.generation(r.side_b_model, r.prompt_id).text;
    out.push_back(std::move(u));
  }
  return out;
}

AnnotationStore::AnnotationStore(std::vector<AnnotationUnit> units, std::uint64_t seed,
                                 std::optional<std::filesystem::path> votes_path)
    : units_(std::move(units)), seed_(seed), votes_path_(std::move(votes_path)) {
  for (std::size_t i = 0; i < units_.size(); ++i) {
    if (!unit_index_.emplace(units_[i].unit_id, i).second) throw ValidationError("duplicate unit id " + units_[i].unit_id);
  }
  if (!votes_path_) return;
  if (std::filesystem::exists(*votes_path_)) {
    std::ifstream in(*votes_path_);
    std::string line;
    long number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (line.empty()) continue;
      const json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) throw FormatError("votes file: not a JSON object", number);
      const auto unit = j.value("unit_id", std::string{});
      const auto annotator = j.value("annotator_id", std::string{});
      const auto label = parse_decision(j.value("label", std::string{}));
      if (!label || annotator.empty() || !unit_index_.contains(unit)) {
        throw FormatError("votes file: vote does not belong to this sample", number);
      }
      votes_[{annotator, unit}] = *label;
    }
  }
  log_.open(*votes_path_, std::ios::app);
  if (!log_) throw Error("cannot append to " + votes_path_->string());
}

bool AnnotationStore::swapped(const std::string& annotator_id, const std::string& unit_id) const {
  return rng::Engine(rng::derive_seed(seed_ ^ rng::hash_string(annotator_id), kSwapStream, rng::hash_string(unit_id)))
      .coin();
}

std::vector<std::size_t> AnnotationStore::order_for(const std::string& annotator_id) const {
  std::vector<std::size_t> order(units_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng::Engine engine(rng::derive_seed(seed_, kOrderStream, rng::hash_string(annotator_id)));
  rng::shuffle(order, engine);
  return order;
}

std::string AnnotationStore::open_session(const std::string& annotator_id) {
  if (annotator_id.empty()) throw ValidationError("annotator_id must be non-empty");
  std::lock_guard lock(mutex_);
  std::string id;
  do {
    id = random_token();
  } while (sessions_.contains(id));
  sessions_[id] = annotator_id;
  return id;
}

const std::string& AnnotationStore::annotator_of(const std::string& session_id) const {
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw NotFoundError("unknown session");
  return it->second;
}

Progress AnnotationStore::progress_locked(const std::string& annotator_id) const {
  Progress p{0, static_cast<int>(units_.size())};
  for (const auto& u : units_) p.answered += votes_.contains({annotator_id, u.unit_id});
  return p;
}

Progress AnnotationStore::progress(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  return progress_locked(annotator_of(session_id));
}

std::optional<PairView> AnnotationStore::next(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  const std::string& annotator = annotator_of(session_id);
  for (std::size_t i : order_for(annotator)) {
    const auto& u = units_[i];
    if (votes_.contains({annotator, u.unit_id})) continue;
    const bool swap = swapped(annotator, u.unit_id);
    return PairView{u.unit_id, u.headline, swap ? u.joke_b : u.joke_a, swap ? u.joke_a : u.joke_b};
  }
  return std::nullopt;
}

VoteResult AnnotationStore::vote(const std::string& session_id, const std::string& unit_id, Decision choice) {
  std::lock_guard lock(mutex_);
  const std::string annotator = annotator_of(session_id);
  if (!unit_index_.contains(unit_id)) throw NotFoundError("unknown unit");
  const Decision canonical = swapped(annotator, unit_id) ? swap_sides(choice) : choice;
  VoteResult out;
  const auto [it, inserted] = votes_.emplace(std::make_pair(annotator, unit_id), canonical);
  if (!inserted) {
    if (it->second != canonical) throw VoteConflict("a different vote for this unit is already recorded");
    out.duplicate = true;
  } else if (log_.is_open()) {
    nlohmann::ordered_json line{{"unit_id", unit_id},
                                {"annotator_id", annotator},
                                {"label", to_string(canonical)},
                                {"presented_choice", to_string(choice)}};
    log_ << line.dump() << '\n';
    log_.flush();
  }
  out.progress = progress_locked(annotator);
  return out;
}

stats::AnnotationTable AnnotationStore::table() const {
  std::lock_guard lock(mutex_);
  stats::AnnotationTable t;
  for (const auto& [key, label] : votes_) t.add(key.second, key.first, label);
  return t;
}

LiveStats AnnotationStore::stats() const {
  const auto t = table();
  LiveStats s;
  std::set<std::string> annotators;
  for (const auto& [unit, votes] : t.units()) {
    s.votes += static_cast<int>(votes.size());
    for (const auto& [annotator, label] : votes) annotators.insert(annotator);
  }
  s.annotators = static_cast<int>(annotators.size());
  s.raw_agreement = stats::percent_agreement(t);
  try {
    const auto a = stats::krippendorff_alpha(t);
    s.alpha = a.value_or_convention();
    s.alpha_degenerate = a.degenerate();
  } catch (const ValidationError&) {
    // not enough overlap yet
  }
  return s;
}

stats::AnnotationTable load_annotation_table(const std::filesystem::path& votes_path) {
  std::ifstream in(votes_path);
  if (!in) throw NotFoundError("cannot open votes file " + votes_path.string());
  stats::AnnotationTable t;
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, false);
    const auto label = j.is_object() ? parse_decision(j.value("label", std::string{})) : std::nullopt;
    if (!label || !j.contains("unit_id") || !j.contains("annotator_id")) throw FormatError("votes file: bad vote", number);
    t.add(j.at("unit_id").get<std::string>(), j.at("annotator_id").get<std::string>(), *label);
  }
  return t;
}

std::string default_instructions() {
  return "You will see a headline and two jokes written for it, labelled A and B.\n"
         "Pick the joke you find funnier. Choose TIE only when you honestly cannot separate them.\n"
         "Judge the joke itself, not its length or polish. The order of A and B is random.\n"
         "You can stop at any time; your votes are saved as you go.\n";
}

// HTTP layer.

namespace {

json error_body(std::string_view message) { return {{"error", message}}; }

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json progress_json(const Progress& p) { return {{"answered", p.answered}, {"total", p.total}}; }

}  // namespace

AnnotationServer::AnnotationServer(std::shared_ptr<AnnotationStore> store, ServerOptions options)
    : store_(std::move(store)), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

AnnotationServer::~AnnotationServer() { stop(); }

void AnnotationServer::install_routes() {
  auto& s = *server_;
  const std::string origin = options_.allowed_origin;
  s.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Vary", "Origin");
  });
  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Max-Age", "600");
  });
  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const NotFoundError& e) {
      send(res, 404, error_body(e.what()));
    } catch (const VoteConflict& e) {
      send(res, 409, error_body(e.what()));
    } catch (const ValidationError& e) {
      send(res, 400, error_body(e.what()));
    } catch (const std::exception&) {
      send(res, 500, error_body("internal error"));
    }
  });

  const auto body_of = [](const httplib::Request& req) {
    json j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ValidationError("body must be a JSON object");
    return j;
  };
  const auto string_field = [](const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw ValidationError(std::string("\"") + key + "\" must be a string");
    return it->get<std::string>();
  };

  s.Post("/sessions", [this, body_of, string_field](const httplib::Request& req, httplib::Response& res) {
    const auto annotator = string_field(body_of(req), "annotator_id");
    send(res, 201, {{"session_id", store_->open_session(annotator)}});
  });
  s.Get(R"(/sessions/([^/]+)/next)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto view = store_->next(req.matches[1]);
    if (!view) {
      res.status = 204;
      return;
    }
    send(res, 200,
         {{"unit_id", view->unit_id}, {"headline", view->headline}, {"option_a", view->option_a}, {"option_b", view->option_b}});
  });
  s.Post(R"(/sessions/([^/]+)/votes)", [this, body_of, string_field](const httplib::Request& req, httplib::Response& res) {
    const auto body = body_of(req);
    const auto unit = string_field(body, "unit_id");
    const auto choice_text = string_field(body, "choice");
    const auto choice = choice_text == "A" ? std::optional(Decision::kA)
                        : choice_text == "B" ? std::optional(Decision::kB)
                        : choice_text == "TIE" ? std::optional(Decision::kTie)
                                               : std::nullopt;
    if (!choice) throw ValidationError("choice must be \"A\", \"B\" or \"TIE\"");
    const auto r = store_->vote(req.matches[1], unit, *choice);
    send(res, 200, {{"accepted", r.accepted}, {"duplicate", r.duplicate}, {"progress", progress_json(r.progress)}});
  });
  s.Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
    const auto st = store_->stats();
    const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    send(res, 200,
         {{"votes", st.votes},
          {"annotators", st.annotators},
          {"units", store_->units().size()},
          {"raw_agreement", opt(st.raw_agreement)},
          {"alpha", opt(st.alpha)},
          {"alpha_degenerate", st.alpha_degenerate}});
  });
  s.Get("/instructions", [this](const httplib::Request&, httplib::Response& res) {
    send(res, 200, {{"text", options_.instructions}});
  });
}

int AnnotationServer::bind(const std::string& host, int port) {
  // httplib's default also sets SO_REUSEPORT, which lets two servers share a port silently.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw Error("cannot bind " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) throw Error(fmt::format("cannot bind {}:{} (port busy?)", host, port));
  return port;
}

void AnnotationServer::serve() { server_->listen_after_bind(); }

void AnnotationServer::start() {
  thread_ = std::thread([this] { serve(); });
  server_->wait_until_ready();
}

void AnnotationServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace laughboard::app::annotation
