#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "mfst/data/binary_io.hpp"
#include "mfst/data/manifest.hpp"
#include "mfst/data/splits.hpp"
#include "mfst/data/synthetic.hpp"
#include "mfst/error.hpp"
#include "temp_dir.hpp"

namespace mfst {
namespace {

using testing::TempDir;

// One small video: 10 frames, visual 10x4 (160 bytes), 3 tokens of width 4,
// audio 10x2, two annotators, segments [0,5) and [5,10).
VideoRecord small_record(const std::string& id = "v0") {
  VideoRecord r;
  r.features.video_id = id;
  r.features.visual = Tensor2(10, 4);
  r.features.text = Tensor2(3, 4);
  r.features.audio = Tensor2(10, 2);
  for (std::size_t i = 0; i < 40; ++i) r.features.visual.data()[i] = 0.25 * static_cast<double>(i);
  for (std::size_t i = 0; i < 12; ++i) r.features.text.data()[i] = -0.5 * static_cast<double>(i);
  for (std::size_t i = 0; i < 20; ++i) r.features.audio.data()[i] = 1.0 / (1.0 + static_cast<double>(i));
  ScoreVector a(10), b(10);
  for (std::size_t f = 0; f < 10; ++f) {
    a[f] = static_cast<double>(f) / 10.0;
    b[f] = f % 2 == 0 ? 0.5 : 0.25;
  }
  r.annotator_scores = {a, b};
  r.gt_scores = aggregate_ground_truth(r.annotator_scores);
  r.segments = {{0, 5}, {5, 10}};
  return r;
}

std::filesystem::path write_small(const TempDir& dir) {
  Dataset ds{"tiny", {small_record()}};
  return save_dataset(dir.path(), ds);
}

TEST(BinaryIo, ReadsExactSizedPayload) {
  TempDir dir;
  const auto manifest = write_small(dir);
  EXPECT_EQ(std::filesystem::file_size(dir / "videos/v0/visual.f32"), 160u);
  const Dataset ds = load_dataset(manifest);
  ASSERT_EQ(ds.videos.size(), 1u);
  EXPECT_EQ(ds.videos[0].frames(), 10u);
  EXPECT_EQ(ds.videos[0].features.visual(9, 3), 0.25 * 39);
}

TEST(BinaryIo, OneFloatShortIsSizeMismatch) {
  TempDir dir;
  const auto manifest = write_small(dir);
  std::filesystem::resize_file(dir / "videos/v0/visual.f32", 156);
  try {
    load_dataset(manifest);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("v0"), std::string::npos) << msg;
    EXPECT_NE(msg.find("expected 160 bytes"), std::string::npos) << msg;
    EXPECT_NE(msg.find("156"), std::string::npos) << msg;
  }
}

TEST(BinaryIo, MissingPayloadIsIoError) {
  TempDir dir;
  const auto manifest = write_small(dir);
  std::filesystem::remove(dir / "videos/v0/audio.f32");
  EXPECT_THROW(load_dataset(manifest), IoError);
  EXPECT_THROW(load_dataset(dir / "nope.json"), IoError);
}

TEST(BinaryIo, NonFiniteValueIsNumericError) {
  TempDir dir;
  const auto manifest = write_small(dir);
  std::vector<double> text(12, 0.0);
  text[5] = std::numeric_limits<double>::quiet_NaN();
  write_f32_file(dir / "videos/v0/text.f32", text);
  EXPECT_THROW(load_dataset(manifest), NumericError);
}

TEST(BinaryIo, RoundTripIsBitExactForF32Values) {
  TempDir dir;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0.0, 10.0);
  std::vector<double> values(257);
  for (double& v : values) v = round_to_f32(d(rng));
  write_f32_file(dir / "x.f32", values);
  EXPECT_EQ(read_f32_file(dir / "x.f32", values.size()), values);
}

TEST(Manifest, SegmentGapIsValidationError) {
  TempDir dir;
  Dataset ds{"tiny", {small_record()}};
  ds.videos[0].segments = {{0, 5}, {6, 10}};
  const auto manifest = save_dataset(dir.path(), ds);
  try {
    load_dataset(manifest);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("gap at frame 5"), std::string::npos) << e.what();
  }
}

TEST(Manifest, OverlapAndOverrunAreValidationErrors) {
  EXPECT_THROW(validate_partition(std::vector<Segment>{{0, 6}, {5, 10}}, 10), ValidationError);
  EXPECT_THROW(validate_partition(std::vector<Segment>{{0, 5}, {5, 11}}, 10), ValidationError);
  EXPECT_THROW(validate_partition(std::vector<Segment>{{0, 5}}, 10), ValidationError);
  EXPECT_NO_THROW(validate_partition(std::vector<Segment>{{0, 10}}, 10));
}

TEST(Manifest, AnnotatorOutOfRangeIsValidationError) {
  TempDir dir;
  Dataset ds{"tiny", {small_record()}};
  ds.videos[0].annotator_scores[1][3] = 1.5;
  const auto manifest = save_dataset(dir.path(), ds);
  EXPECT_THROW(load_dataset(manifest), ValidationError);
}

TEST(Manifest, WrongFormatTagIsFormatError) {
  TempDir dir;
  const auto manifest = write_small(dir);
  std::string text = testing::slurp(manifest);
  text.replace(text.find(kManifestFormat), std::string(kManifestFormat).size(), "other/9");
  std::ofstream(manifest, std::ios::trunc) << text;
  EXPECT_THROW(load_dataset(manifest), FormatError);
}

TEST(GroundTruth, MeanThenMinMax) {
  const std::vector<ScoreVector> ann{{0.0, 0.5, 1.0}, {0.2, 0.5, 0.6}};
  const ScoreVector gt = aggregate_ground_truth(ann);
  // means 0.1, 0.5, 0.8
  EXPECT_NEAR(gt[0], 0.0, 1e-15);
  EXPECT_NEAR(gt[1], 0.4 / 0.7, 1e-15);
  EXPECT_NEAR(gt[2], 1.0, 1e-15);
}

TEST(GroundTruth, ConstantMapsToZeros) {
  const std::vector<ScoreVector> ann{{0.3, 0.3}, {0.3, 0.3}};
  EXPECT_EQ(aggregate_ground_truth(ann), (ScoreVector{0.0, 0.0}));
}

TEST(GroundTruth, RecomputedOnLoadFromAnnotators) {
  TempDir dir;
  VideoRecord r = small_record();
  const auto manifest = save_dataset(dir.path(), Dataset{"tiny", {r}});
  const VideoRecord loaded = load_dataset(manifest).videos[0];
  std::vector<ScoreVector> narrowed = r.annotator_scores;
  for (auto& a : narrowed)
    for (double& v : a) v = round_to_f32(v);
  const ScoreVector expected = aggregate_ground_truth(narrowed);
  ASSERT_EQ(loaded.gt_scores.size(), expected.size());
  for (std::size_t f = 0; f < expected.size(); ++f) {
    EXPECT_NEAR(loaded.gt_scores[f], expected[f], 1e-9);
    EXPECT_NEAR(loaded.gt_scores[f], r.gt_scores[f], 1e-6);
  }
}

SyntheticConfig quick_config(std::uint64_t seed, bool audio = true) {
  SyntheticConfig c;
  c.seed = seed;
  c.audio_dependent = audio;
  return c;
}

TEST(Synthetic, FortyVideosSatisfyInvariants) {
  const SyntheticDataset s = synthesize(quick_config(11));
  ASSERT_EQ(s.dataset.videos.size(), 40u);
  std::set<std::string> ids;
  for (const VideoRecord& r : s.dataset.videos) {
    ids.insert(r.id());
    EXPECT_NO_THROW(validate_record(r));
    EXPECT_GE(r.frames(), 48u);
    EXPECT_LE(r.frames(), 96u);
    EXPECT_GE(r.features.tokens(), 4u);
    EXPECT_LE(r.features.tokens(), 12u);
    EXPECT_EQ(r.annotator_scores.size(), 3u);
    for (const Segment& seg : r.segments) {
      EXPECT_GE(seg.length(), 5u);
      EXPECT_LE(seg.length(), 15u);
    }
    const ScoreVector& planted = s.planted_scores.at(r.id());
    ASSERT_EQ(planted.size(), r.frames());
    for (const auto& ann : r.annotator_scores) {
      for (std::size_t f = 0; f < r.frames(); ++f) {
        EXPECT_LE(std::abs(ann[f] - planted[f]), 0.1 + 1e-6);
      }
    }
  }
  EXPECT_EQ(ids.size(), 40u);
}

TEST(Synthetic, SameSeedWritesIdenticalBytes) {
  TempDir a, b;
  generate_synthetic(quick_config(5), a.path());
  generate_synthetic(quick_config(5), b.path());
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), a.path());
    ASSERT_TRUE(std::filesystem::exists(b.path() / rel)) << rel;
    EXPECT_EQ(testing::slurp(entry.path()), testing::slurp(b.path() / rel)) << rel;
    ++files;
  }
  EXPECT_GT(files, 40u * 6u);
}

TEST(Synthetic, DifferentSeedsDiffer) {
  const SyntheticDataset a = synthesize(quick_config(5));
  const SyntheticDataset b = synthesize(quick_config(6));
  EXPECT_NE(a.dataset.videos[0].gt_scores, b.dataset.videos[0].gt_scores);
}

TEST(Synthetic, WrittenDatasetLoadsWithPlantedScores) {
  TempDir dir;
  const SyntheticDataset s = synthesize(quick_config(8));
  const auto manifest = write_synthetic(dir.path(), s);
  const Dataset loaded = load_dataset(manifest);
  const auto planted = load_planted_scores(dir.path());
  ASSERT_EQ(loaded.videos.size(), s.dataset.videos.size());
  for (std::size_t i = 0; i < loaded.videos.size(); ++i) {
    const VideoRecord& r = loaded.videos[i];
    const VideoRecord& o = s.dataset.videos[i];
    EXPECT_EQ(r.features.visual, o.features.visual) << r.id();
    EXPECT_EQ(r.annotator_scores, o.annotator_scores) << r.id();
    EXPECT_EQ(r.segments, o.segments);
    EXPECT_EQ(planted.at(r.id()), s.planted_scores.at(r.id()));
  }
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(Synthetic, AudioIndependentScoresIgnoreAudio) {
  const SyntheticDataset s = synthesize(quick_config(21, false));
  for (double w : s.scorer.audio_weights.data()) EXPECT_EQ(w, 0.0);
  // Pool every audio channel against the planted score of its frame.
  std::vector<double> audio, score;
  for (const VideoRecord& r : s.dataset.videos) {
    const ScoreVector& planted = s.planted_scores.at(r.id());
    for (std::size_t f = 0; f < r.frames(); ++f) {
      for (std::size_t c = 0; c < r.features.audio.cols(); ++c) {
        audio.push_back(r.features.audio(f, c));
        score.push_back(planted[f]);
      }
    }
  }
  ASSERT_GE(audio.size(), 5000u);
  EXPECT_LT(std::abs(correlation(audio, score)), 0.1);
}

TEST(Synthetic, RejectsBadConfig) {
  SyntheticConfig c;
  c.visual_dim = 15;
  EXPECT_THROW(synthesize(c), ConfigError);
  c = {};
  c.segment_min = 10;
  c.segment_max = 12;
  EXPECT_THROW(synthesize(c), ConfigError);
  c = {};
  c.num_videos = 0;
  EXPECT_THROW(synthesize(c), ConfigError);
}

std::vector<VideoRecord> numbered(std::size_t n, const std::string& prefix = "v") {
  std::vector<VideoRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(small_record(prefix + std::to_string(i)));
  return out;
}

std::set<std::string> ids_of(const std::vector<VideoRecord>& v) {
  std::set<std::string> out;
  for (const auto& r : v) out.insert(r.id());
  return out;
}

TEST(Splits, CanonicalFiftyGivesFortyTen) {
  const std::vector<std::vector<VideoRecord>> pools{numbered(50)};
  const Split s = make_splits(pools, Setting::kCanonical, 9);
  EXPECT_EQ(s.train.size(), 40u);
  EXPECT_EQ(s.eval.size(), 10u);
  const auto train = ids_of(s.train), eval = ids_of(s.eval);
  std::set<std::string> all = train;
  all.insert(eval.begin(), eval.end());
  EXPECT_EQ(all.size(), 50u);
}

TEST(Splits, SeedDeterminesPartition) {
  const std::vector<std::vector<VideoRecord>> pools{numbered(30)};
  EXPECT_EQ(ids_of(make_splits(pools, Setting::kCanonical, 4).eval),
            ids_of(make_splits(pools, Setting::kCanonical, 4).eval));
  EXPECT_NE(ids_of(make_splits(pools, Setting::kCanonical, 4).eval),
            ids_of(make_splits(pools, Setting::kCanonical, 5).eval));
}

TEST(Splits, AugmentPoolsBothDatasets) {
  const std::vector<std::vector<VideoRecord>> pools{numbered(10, "a"), numbered(10, "b")};
  const Split s = make_splits(pools, Setting::kAugment, 2);
  EXPECT_EQ(s.train.size(), 16u);
  EXPECT_EQ(s.eval.size(), 4u);
}

TEST(Splits, TransferTrainsOnFirstEvaluatesOnSecond) {
  const std::vector<std::vector<VideoRecord>> pools{numbered(7, "a"), numbered(3, "b")};
  const Split s = make_splits(pools, Setting::kTransfer, 2);
  EXPECT_EQ(ids_of(s.train), ids_of(pools[0]));
  EXPECT_EQ(ids_of(s.eval), ids_of(pools[1]));
}

TEST(Splits, WrongDatasetCountIsConfigError) {
  const std::vector<std::vector<VideoRecord>> one{numbered(5)};
  const std::vector<std::vector<VideoRecord>> two{numbered(5), numbered(5)};
  EXPECT_THROW(make_splits(one, Setting::kTransfer, 1), ConfigError);
  EXPECT_THROW(make_splits(one, Setting::kAugment, 1), ConfigError);
  EXPECT_THROW(make_splits(two, Setting::kCanonical, 1), ConfigError);
  EXPECT_THROW(parse_setting("mixed"), ConfigError);
}

TEST(Splits, EvalCountRoundsAndClamps) {
  EXPECT_EQ(eval_count(50, 0.2), 10u);
  EXPECT_EQ(eval_count(3, 0.2), 1u);
  EXPECT_EQ(eval_count(2, 0.9), 1u);
  EXPECT_EQ(eval_count(12, 0.2), 2u);
}

}  // namespace
}  // namespace mfst
