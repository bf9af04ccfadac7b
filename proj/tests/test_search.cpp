#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "bnrobot/errors.hpp"
#include "bnrobot/search.hpp"

using namespace bnr;

namespace {

// Small but real search problem, cheap enough for unit tests.
SearchConfig tiny_search_config(std::uint64_t seed) {
    SearchConfig cfg;
    cfg.total_iterations = 40;
    cfg.stage1_iterations = 15;
    cfg.stage1_horizon = 60;
    cfg.stage2_horizon = 120;
    cfg.clap_window = {50, 80};
    cfg.training_set_size = 2;
    cfg.seed = seed;
    cfg.train_seed = seed + 17;
    return cfg;
}

} // namespace

TEST_CASE("accept: not-worse rule, sideways moves allowed") {
    CHECK(accept(0.4, 0.5));
    CHECK(accept(0.5, 0.5));
    CHECK_FALSE(accept(0.6, 0.5));
}

TEST_CASE("propose_move: uniform over the 160 (node,row) cells of a 20x8 table") {
    const BooleanNetwork net = random_network(20, 3, true, 1ULL);
    Rng rng(909);
    const int draws = 160 * 200;
    std::vector<int> hits(160, 0);
    for (int i = 0; i < draws; ++i) {
        const MoveProposal mv = propose_move(net, rng);
        REQUIRE(mv.node < 20);
        REQUIRE(mv.row < 8);
        ++hits[mv.node * 8 + mv.row];
    }
    // expectation 200 per cell, sigma ~ 14.1; allow 5 sigma
    for (int c : hits) {
        CHECK(c > 200 - 71);
        CHECK(c < 200 + 71);
    }
}

TEST_CASE("propose_move: a 1-node network has 2 possible moves") {
    const BooleanNetwork net = random_network(1, 1, false, 2ULL);
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const MoveProposal mv = propose_move(net, rng);
        CHECK(mv.node == 0);
        CHECK(mv.row < 2);
    }
}

TEST_CASE("propose_move: same seed, same move sequence") {
    const BooleanNetwork net = random_network(20, 3, true, 5ULL);
    Rng a(42), b(42);
    for (int i = 0; i < 200; ++i) {
        const MoveProposal ma = propose_move(net, a);
        const MoveProposal mb = propose_move(net, b);
        CHECK(ma.node == mb.node);
        CHECK(ma.row == mb.row);
    }
}

TEST_CASE("build_training_set: determinism and field ranges") {
    const ArenaConfig arena;
    const auto a = build_training_set(7ULL, 30, Stage::full, 1000, {500, 650}, arena);
    const auto b = build_training_set(7ULL, 30, Stage::full, 1000, {500, 650}, arena);
    CHECK(a == b);
    const auto c = build_training_set(8ULL, 30, Stage::full, 1000, {500, 650}, arena);
    CHECK(a != c);

    for (const TrialSpec& t : a) {
        CHECK(t.horizon == 1000);
        CHECK(t.stage == Stage::full);
        CHECK(t.clap_step >= 500);
        CHECK(t.clap_step <= 650);
        CHECK(t.perturb_step >= 1);
        CHECK(t.perturb_step <= 1000);
        CHECK(t.perturb_angle >= -kPi);
        CHECK(t.perturb_angle <= kPi);
        // start pose inside the quarter-disc at the corner opposite the light
        const double dx = t.start.x - arena.opposite_x();
        const double dy = t.start.y - arena.opposite_y();
        CHECK(std::sqrt(dx * dx + dy * dy) <= arena.start_radius + 1e-12);
        CHECK(t.start.heading > -kPi);
        CHECK(t.start.heading <= kPi);
    }

    const auto s1 = build_training_set(7ULL, 10, Stage::phototaxis_only, 500, {500, 650}, arena);
    for (const TrialSpec& t : s1) {
        CHECK(t.horizon == 500);
        CHECK(t.clap_step == 0);
        CHECK(t.stage == Stage::phototaxis_only);
    }
}

TEST_CASE("descend_segment: finds a known single-flip optimum at the geometric rate") {
    // Synthetic objective: table-bit Hamming distance to a target network one
    // flip away. P(hit in 160 draws) = 1 - (1 - 1/160)^160 ~ 0.633.
    Rng seeder(2525);
    int found = 0;
    const int reps = 600;
    for (int rep = 0; rep < reps; ++rep) {
        BooleanNetwork start = random_network(20, 3, true, seeder);
        const BooleanNetwork target = flip_table_bit(start, 7, 3);
        const auto eval = [&](const BooleanNetwork& net) {
            return static_cast<double>(table_hamming_distance(net, target));
        };
        Rng moves(seeder.next_u64());
        double err = eval(start);
        descend_segment(start, err, 1, 160, 1, eval, moves, nullptr, nullptr);
        found += err == 0.0;
    }
    // 600 Bernoulli trials at p ~ 0.633: 5 sigma ~ 59
    CHECK(found > 380 - 59);
    CHECK(found < 380 + 59);
}

TEST_CASE("stochastic_descent: zero iterations returns the evaluated initial network") {
    SearchConfig cfg = tiny_search_config(11);
    cfg.total_iterations = 0;
    cfg.stage1_iterations = 0;
    const ArenaConfig arena;
    const SearchResult res = stochastic_descent(cfg, arena);
    CHECK(res.records.empty());
    CHECK(res.accepted_moves == 0);
    CHECK(res.best_network == res.initial_network);
    CHECK(res.best_error == res.initial_error);
    CHECK(res.best_network.n() == 20);
}

TEST_CASE("stochastic_descent: replays bit-for-bit from the same seeds") {
    const SearchConfig cfg = tiny_search_config(3131);
    const ArenaConfig arena;
    const SearchResult a = stochastic_descent(cfg, arena);
    const SearchResult b = stochastic_descent(cfg, arena);
    CHECK(a.best_network == b.best_network);
    CHECK(a.best_error == b.best_error);
    CHECK(a.accepted_moves == b.accepted_moves);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].candidate_error == b.records[i].candidate_error);
        CHECK(a.records[i].accepted == b.records[i].accepted);
    }
}

TEST_CASE("stochastic_descent: incumbent error non-increasing within each stage, "
          "one flip per accepted move, topology fixed") {
    const SearchConfig cfg = tiny_search_config(777);
    const ArenaConfig arena;
    const SearchResult res = stochastic_descent(cfg, arena);
    REQUIRE(res.records.size() == cfg.total_iterations);

    double last = res.initial_error;
    int stage = 1;
    BooleanNetwork replay = res.initial_network;
    for (const IterationRecord& r : res.records) {
        if (r.stage != stage)
            stage = r.stage; // the incumbent was re-evaluated at the boundary
        else
            CHECK(r.incumbent_error <= last);
        last = r.incumbent_error;
        if (r.accepted) {
            CHECK(r.candidate_error == r.incumbent_error);
            const BooleanNetwork next = flip_table_bit(replay, r.node, r.row);
            CHECK(table_hamming_distance(replay, next) == 1);
            replay = next;
        }
    }
    CHECK(replay == res.best_network);
    CHECK(topology_signature(replay) == topology_signature(res.initial_network));
    CHECK(res.records.back().incumbent_error == res.best_error);
}

TEST_CASE("stochastic_descent: checkpoint resume reproduces the straight run") {
    const ArenaConfig arena;
    SearchConfig cfg = tiny_search_config(4242);
    const SearchResult full = stochastic_descent(cfg, arena);

    // run the first 22 iterations, checkpoint, then resume to the end
    SearchConfig half = cfg;
    half.total_iterations = 22;
    const SearchResult part = stochastic_descent(half, arena);
    const SearchCheckpoint cp = part.final_checkpoint(22);

    const auto dir = std::filesystem::temp_directory_path() / "bnrobot_cp_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "cp.json").string();
    save_checkpoint(cp, path);
    const SearchCheckpoint loaded = load_checkpoint(path);
    CHECK(loaded.incumbent == cp.incumbent);
    CHECK(loaded.iteration == 22);
    CHECK(loaded.move_rng_state == cp.move_rng_state);

    const SearchResult resumed = stochastic_descent(cfg, arena, &loaded);
    CHECK(resumed.best_network == full.best_network);
    CHECK(resumed.best_error == full.best_error);
    CHECK(resumed.records.size() == cfg.total_iterations - 22);
    // the resumed records equal the tail of the straight run
    for (std::size_t i = 0; i < resumed.records.size(); ++i) {
        const IterationRecord& a = resumed.records[i];
        const IterationRecord& b = full.records[22 + i];
        CHECK(a.iteration == b.iteration);
        CHECK(a.node == b.node);
        CHECK(a.row == b.row);
        CHECK(a.candidate_error == b.candidate_error);
        CHECK(a.accepted == b.accepted);
        CHECK(a.incumbent_error == b.incumbent_error);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("write_search_log: spec'd columns, one row per iteration") {
    const SearchConfig cfg = tiny_search_config(88);
    const ArenaConfig arena;
    const SearchResult res = stochastic_descent(cfg, arena);
    std::ostringstream out;
    write_search_log(out, res.records);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "iteration,stage,candidate_error,accepted,incumbent_error");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == cfg.total_iterations);
}

TEST_CASE("search config validation names the field") {
    SearchConfig cfg;
    cfg.stage1_iterations = cfg.total_iterations + 1;
    try {
        cfg.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("stage1_iterations") != std::string::npos);
    }
    cfg = SearchConfig{};
    cfg.clap_window = {0, 650};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SearchConfig{};
    cfg.clap_window = {500, 1000};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SearchConfig{};
    cfg.alpha = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SearchConfig{};
    CHECK_NOTHROW(cfg.validate());
}
