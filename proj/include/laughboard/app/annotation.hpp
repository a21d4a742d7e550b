#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "laughboard/app/dataset.hpp"
#include "laughboard/core/errors.hpp"
#include "laughboard/core/match_graph.hpp"
#include "laughboard/stats/agreement.hpp"

namespace httplib {
class Server;
}

// Blind pairwise voting for human annotators. Model identities stay inside
// AnnotationUnit; nothing that leaves the service carries them.
namespace laughboard::app::annotation {

struct AnnotationUnit {
  std::string unit_id;  // opaque
  std::int64_t match_id = 0;
  std::string model_a;  // canonical order
  std::string model_b;
  std::string headline;
  std::string joke_a;
  std::string joke_b;
};

// Uniform seeded sample of decisive, active records (no ties, no tombstones).
std::vector<AnnotationUnit> sample_units(const MatchHistoryGraph& graph, const Dataset& dataset,
                                         std::size_t sample_size, std::uint64_t seed);

struct PairView {
  std::string unit_id;
  std::string headline;
  std::string option_a;
  std::string option_b;
};

struct Progress {
  int answered = 0;
  int total = 0;
};

struct VoteResult {
  bool accepted = true;
  bool duplicate = false;  // same label as before; nothing new stored
  Progress progress;
};

struct LiveStats {
  int votes = 0;
  int annotators = 0;
  std::optional<double> raw_agreement;
  std::optional<double> alpha;
  bool alpha_degenerate = false;  // one label everywhere; alpha reported as 1.0
};

// The same annotator voting twice on a unit with a different label.
class VoteConflict : public Error {
 public:
  using Error::Error;
};

// Session and vote bookkeeping. Thread-safe. Votes are stored in canonical
// side order and appended to `votes_path` (reloaded on construction).
class AnnotationStore {
 public:
  AnnotationStore(std::vector<AnnotationUnit> units, std::uint64_t seed,
                  std::optional<std::filesystem::path> votes_path = std::nullopt);

  std::string open_session(const std::string& annotator_id);
  // nullopt when the annotator has voted on every unit.
  std::optional<PairView> next(const std::string& session_id) const;
  // choice is in the frame the annotator saw.
  VoteResult vote(const std::string& session_id, const std::string& unit_id, Decision choice);
  LiveStats stats() const;
  Progress progress(const std::string& session_id) const;

  stats::AnnotationTable table() const;
  const std::vector<AnnotationUnit>& units() const { return units_; }
  // Whether option_a shows canonical side B to this annotator.
  bool swapped(const std::string& annotator_id, const std::string& unit_id) const;

 private:
  const std::string& annotator_of(const std::string& session_id) const;
  std::vector<std::size_t> order_for(const std::string& annotator_id) const;
  Progress progress_locked(const std::string& annotator_id) const;

  std::vector<AnnotationUnit> units_;
  std::map<std::string, std::size_t> unit_index_;
  std::uint64_t seed_;
  std::optional<std::filesystem::path> votes_path_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> sessions_;  // session -> annotator
  std::map<std::pair<std::string, std::string>, Decision> votes_;  // (annotator, unit) -> canonical
  std::ofstream log_;
};

// Reads a votes file into a table (for the report's alpha).
stats::AnnotationTable load_annotation_table(const std::filesystem::path& votes_path);

std::string default_instructions();

struct ServerOptions {
  std::string allowed_origin = "*";
  std::string instructions = default_instructions();
};

class AnnotationServer {
 public:
  AnnotationServer(std::shared_ptr<AnnotationStore> store, ServerOptions options = {});
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // Port 0 picks a free one. Throws Error when the port is taken.
  int bind(const std::string& host, int port);
  void serve();  // blocks until stop()
  void start();  // serve() on a background thread
  void stop();

 private:
  void install_routes();

  std::shared_ptr<AnnotationStore> store_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace laughboard::app::annotation
