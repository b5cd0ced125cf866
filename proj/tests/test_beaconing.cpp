#include <gtest/gtest.h>

#include <set>

#include "psim/beaconing/ldm.hpp"
#include "psim/beaconing/messages.hpp"
#include "psim/common/rng.hpp"

namespace psim::beaconing {
namespace {

TEST(StationId, BijectiveAndScoped) {
  Rng rng(1);
  std::set<StationId> seen;
  for (int i = 0; i < 5000; ++i) {
    std::uint64_t at = rng.next_u64();
    for (auto scope : {AppScope::kCam, AppScope::kDenm}) {
      StationId id = station_id_for(at, scope);
      EXPECT_EQ(id.scope, scope);
      EXPECT_EQ(at_id_of(id), at);
      seen.insert(id);
    }
    EXPECT_NE(station_id_for(at, AppScope::kCam).value, station_id_for(at, AppScope::kDenm).value);
  }
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(station_id_for(1, AppScope::kCam).value, 1u);
}

TEST(StationId, HexForm) {
  StationId id{0x00ab, AppScope::kCam};
  EXPECT_EQ(id.to_string(), "00000000000000ab");
  EXPECT_EQ(*parse_station_value("00000000000000ab"), 0xabu);
  EXPECT_FALSE(parse_station_value("ab"));
  EXPECT_FALSE(parse_station_value("zz000000000000ab"));
}

TEST(Denm, EventTypeNames) {
  for (auto t : {DenmEventType::kHazard, DenmEventType::kAccident, DenmEventType::kRoadwork,
                 DenmEventType::kWeather}) {
    EXPECT_EQ(parse_denm_event_type(to_string(t)), t);
  }
  EXPECT_FALSE(parse_denm_event_type("flood"));
}

BeaconSource source_with_id() {
  BeaconSource s;
  s.cam_id = StationId{42, AppScope::kCam};
  s.true_position = {5, 6};
  s.velocity = {1, 0};
  return s;
}

TEST(Emission, PeriodIsExactInTicks) {
  auto s = source_with_id();
  Rng rng(1);
  std::vector<std::int64_t> emitted;
  for (std::int64_t t = 0; t < 10; ++t) {
    auto out = emit_cam(s, t, 0.05, 2, 0.0, rng);
    if (out.status == EmitStatus::kEmitted) {
      emitted.push_back(t);
      EXPECT_DOUBLE_EQ(out.cam->timestamp, t * 0.05);
      EXPECT_EQ(out.cam->position, (Vec2{5, 6}));
    } else {
      EXPECT_EQ(out.status, EmitStatus::kNotDue);
    }
  }
  EXPECT_EQ(emitted, (std::vector<std::int64_t>{0, 2, 4, 6, 8}));
}

TEST(Emission, SilenceSuppressesAndResumesImmediately) {
  auto s = source_with_id();
  Rng rng(1);
  emit_cam(s, 0, 0.05, 2, 0, rng);
  s.in_silence = true;
  EXPECT_EQ(emit_cam(s, 2, 0.05, 2, 0, rng).status, EmitStatus::kSilent);
  EXPECT_EQ(emit_cam(s, 3, 0.05, 2, 0, rng).status, EmitStatus::kSilent);
  s.in_silence = false;
  EXPECT_EQ(emit_cam(s, 3, 0.05, 2, 0, rng).status, EmitStatus::kEmitted);
}

TEST(Emission, StarvedWithoutPseudonym) {
  BeaconSource s;
  Rng rng(1);
  EXPECT_EQ(emit_cam(s, 0, 0.05, 2, 0, rng).status, EmitStatus::kStarved);
  EXPECT_EQ(emit_cam(s, 1, 0.05, 2, 0, rng).status, EmitStatus::kNotDue);
  EXPECT_EQ(emit_cam(s, 2, 0.05, 2, 0, rng).status, EmitStatus::kStarved);
  EXPECT_FALSE(emit_cam(s, 4, 0.05, 2, 0, rng).cam);
}

Cam cam(std::uint64_t id, double t, Vec2 p = {}) {
  Cam c;
  c.station_id = {id, AppScope::kCam};
  c.timestamp = t;
  c.position = p;
  return c;
}

TEST(Ldm, UpsertNoticeAndEviction) {
  Ldm ldm;
  ldm.receive(cam(1, 0.0, {1, 1}), 0.0);
  ldm.receive(cam(1, 0.1, {2, 2}), 0.1);
  ldm.receive(cam(2, 0.1), 0.1);
  EXPECT_EQ(ldm.size(), 2u);
  EXPECT_EQ(ldm.entries().at({1, AppScope::kCam}).last_position, (Vec2{2, 2}));

  ldm.receive(DeactivationNotice{{2, AppScope::kCam}, 0.2}, 0.2);
  EXPECT_FALSE(ldm.contains({2, AppScope::kCam}));
  ldm.receive(DeactivationNotice{{9, AppScope::kCam}, 0.2}, 0.2);  // unknown: no effect
  EXPECT_EQ(ldm.size(), 1u);

  ldm.evict(1.6, 1.5);  // exactly at the timeout: kept
  EXPECT_TRUE(ldm.contains({1, AppScope::kCam}));
  ldm.evict(1.61, 1.5);
  EXPECT_EQ(ldm.size(), 0u);
}

TEST(Ldm, OutOfRangeIgnored) {
  Ldm ldm;
  receive_message(ldm, cam(1, 0), 0, false);
  EXPECT_EQ(ldm.size(), 0u);
  receive_message(ldm, cam(1, 0), 0, true);
  EXPECT_EQ(ldm.size(), 1u);
}

// Owner of an id is id / 10; ids ending in 9 are retired.
IdentityResolver resolver() {
  return [](const StationId& id) -> std::optional<IdentityInfo> {
    if (id.value == 0) return std::nullopt;
    return IdentityInfo{static_cast<VehicleId>(id.value / 10), id.value % 10 == 9};
  };
}

TEST(LdmQuality, GhostAfterChangeWithoutNotice) {
  // Neighbour 1 changed 19 -> 11; the old entry is still within timeout.
  Ldm ldm;
  ldm.receive(cam(19, 0.0), 0.0);
  ldm.receive(cam(11, 0.2), 0.2);
  std::vector<VehicleId> truth = {1};
  auto q = ldm_quality(ldm, truth, resolver());
  EXPECT_EQ(q.ghost_count, 1u);
  EXPECT_EQ(q.missing_count, 0u);
  EXPECT_DOUBLE_EQ(q.awareness_ratio, 1.0);
}

TEST(LdmQuality, NoticeRemovesGhost) {
  Ldm ldm;
  ldm.receive(cam(19, 0.0), 0.0);
  ldm.receive(DeactivationNotice{{19, AppScope::kCam}, 0.1}, 0.1);
  ldm.receive(cam(11, 0.2), 0.2);
  std::vector<VehicleId> truth = {1};
  EXPECT_EQ(ldm_quality(ldm, truth, resolver()).ghost_count, 0u);
}

TEST(LdmQuality, MissingDuringSilence) {
  Ldm ldm;
  ldm.receive(cam(21, 0.0), 0.0);
  std::vector<VehicleId> truth = {1, 2, 3};
  auto q = ldm_quality(ldm, truth, resolver());
  EXPECT_EQ(q.missing_count, 2u);
  EXPECT_DOUBLE_EQ(q.awareness_ratio, 1.0 / 3.0);
}

TEST(LdmQuality, DoubleEntryIsNotAwareness) {
  Ldm ldm;
  ldm.receive(cam(11, 0.0), 0.0);
  ldm.receive(cam(12, 0.0), 0.0);
  std::vector<VehicleId> truth = {1};
  auto q = ldm_quality(ldm, truth, resolver());
  EXPECT_EQ(q.missing_count, 0u);
  EXPECT_DOUBLE_EQ(q.awareness_ratio, 0.0);
}

TEST(LdmQuality, DenmEntriesDoNotCountAsAwareness) {
  Ldm ldm;
  Denm d;
  d.station_id = {11, AppScope::kDenm};
  ldm.receive(d, 0.0);
  std::vector<VehicleId> truth = {1};
  EXPECT_EQ(ldm_quality(ldm, truth, resolver()).missing_count, 1u);
}

TEST(LdmQuality, NobodyInRange) {
  Ldm ldm;
  auto q = ldm_quality(ldm, {}, resolver());
  EXPECT_DOUBLE_EQ(q.awareness_ratio, 1.0);
  EXPECT_EQ(q.missing_count, 0u);
}

}  // namespace
}  // namespace psim::beaconing
