#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace miriad {

struct CommunitySpec {
  std::size_t users = 5;
  std::size_t documents = 8;
};

// Synthetic-corpus shape. Each community is a complete block: every one of
// its users both displays and orders every one of its documents once, so the
// planted document/user partitions are recoverable by co-usage analysis.
struct FixtureSpec {
  std::uint64_t seed = 1;
  int year = 2002;
  std::vector<CommunitySpec> communities;
  std::size_t cross_community_orders = 0;  // noise links between communities
  std::size_t query_events = 0;            // background traffic
  std::size_t display_events = 0;
  std::size_t order_events = 0;
  std::size_t background_documents = 0;
  std::size_t background_customers = 0;
};

// two 5-user x 8-document communities plus light background traffic
FixtureSpec demo_fixture_spec(std::uint64_t seed = 1);

struct FixtureFiles {
  std::filesystem::path log;        // mixed Q/D/O lines, timestamp order
  std::filesystem::path biblio;     // JSON lines
  std::filesystem::path customers;  // customer_id,country,activity
  std::filesystem::path manifest;   // planted structure, for assertions
};

FixtureFiles generate_fixture(const FixtureSpec& spec,
                              const std::filesystem::path& out_dir);

}  // namespace miriad
