#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "shapetone/score.hpp"
#include "support/fixtures.hpp"
#include "support/smf_reader.hpp"

using namespace shapetone;
namespace ts = testsupport;

namespace {

transform::SoundDecomposition single_note() {
    transform::SoundDecomposition s;
    s.total_beats = 4.0;
    s.envelope_count = 1;
    s.events.push_back({0.0, 1.0, 60, 96, transform::Articulation::Staccato, 0});
    return s;
}

transform::SoundDecomposition random_sound(std::mt19937& rng) {
    return transform::apply(ts::random_decomposition(rng), {});
}

}  // namespace

TEST_CASE("transpose_to_range folds by octaves and clamps narrow ranges") {
    CHECK(score::transpose_to_range(60, 48, 72) == 60);
    CHECK(score::transpose_to_range(73, 48, 72) == 61);
    CHECK(score::transpose_to_range(90, 60, 66) == 66);
    CHECK(score::transpose_to_range(30, 48, 72) == 54);
}

TEST_CASE("transpose_to_range is idempotent and lands inside the range") {
    std::mt19937 rng(83);
    std::uniform_int_distribution<int> pitch(0, 127);
    std::uniform_int_distribution<int> lo_d(20, 100);
    std::uniform_int_distribution<int> width(1, 27);
    for (int i = 0; i < 500; ++i) {
        const int lo = lo_d(rng);
        const int hi = std::min(127, lo + width(rng));
        const int p = score::transpose_to_range(pitch(rng), lo, hi);
        CHECK(p >= lo);
        CHECK(p <= hi);
        CHECK(score::transpose_to_range(p, lo, hi) == p);
    }
}

TEST_CASE("instrument table covers the listed programs and defaults wide") {
    const auto [lo, hi] = score::instrument_comfort_range(73);
    CHECK(lo == 60);
    CHECK(hi == 96);
    CHECK(score::instrument_comfort_range(99) == std::pair<int, int>{0, 127});
}

TEST_CASE("empty sound decomposition still emits a well-formed two-track file") {
    const auto bytes = score::to_midi({}, {});
    REQUIRE(bytes.size() > 14);
    CHECK(bytes[0] == 'M');
    CHECK(bytes[1] == 'T');
    CHECK(bytes[2] == 'h');
    CHECK(bytes[3] == 'd');

    const auto smf = ts::parse_smf(bytes);
    CHECK(smf.format == 1);
    CHECK(smf.declared_tracks == 2);
    CHECK(smf.tracks.size() == 2);
    CHECK(smf.tracks_end_with_eot);
}

TEST_CASE("single note golden bytes") {
    const auto bytes = score::to_midi(single_note(), {});

    // Derived from the SMF byte layout: header, tempo track, then a note
    // track holding two program changes and the note pair with a 480-tick
    // delta (varlen 0x83 0x60).
    const std::vector<std::uint8_t> golden{
        'M', 'T', 'h', 'd', 0x00, 0x00, 0x00, 0x06, 0x00, 0x01, 0x00, 0x02, 0x01, 0xE0,
        'M', 'T', 'r', 'k', 0x00, 0x00, 0x00, 0x0B,
        0x00, 0xFF, 0x51, 0x03, 0x07, 0xA1, 0x20,
        0x00, 0xFF, 0x2F, 0x00,
        'M', 'T', 'r', 'k', 0x00, 0x00, 0x00, 0x13,
        0x00, 0xC0, 0x00,
        0x00, 0xC1, 0x00,
        0x00, 0x90, 0x3C, 0x60,
        0x83, 0x60, 0x80, 0x3C, 0x00,
        0x00, 0xFF, 0x2F, 0x00,
    };
    CHECK(bytes == golden);
}

TEST_CASE("emitted files re-parse with paired notes and valid deltas") {
    std::mt19937 rng(89);
    for (int i = 0; i < 25; ++i) {
        const auto sound = random_sound(rng);
        const auto bytes = score::to_midi(sound, {});
        const auto smf = ts::parse_smf(bytes);
        CHECK(smf.all_notes_paired);
        CHECK(smf.all_deltas_nonnegative);
        CHECK(smf.tracks_end_with_eot);
        std::size_t notes = 0;
        for (const auto& track : smf.tracks) {
            notes += track.size();
            for (const auto& note : track) CHECK(note.off_tick > note.on_tick);
        }
        CHECK(notes == sound.events.size());
    }
}

TEST_CASE("envelope events play on channel 0 and patterns on channel 1") {
    transform::SoundDecomposition s;
    s.total_beats = 8.0;
    s.envelope_count = 1;
    s.events.push_back({0.0, 1.0, 60, 90, transform::Articulation::Legato, 0});
    s.events.push_back({2.0, 1.0, 64, 90, transform::Articulation::Staccato, 1});

    const auto smf = ts::parse_smf(score::to_midi(s, {}));
    REQUIRE(smf.tracks.size() == 2);
    REQUIRE(smf.tracks[1].size() == 2);
    int channel_of_60 = -1, channel_of_64 = -1;
    for (const auto& note : smf.tracks[1]) {
        if (note.pitch == 60) channel_of_60 = note.channel;
        if (note.pitch == 64) channel_of_64 = note.channel;
    }
    CHECK(channel_of_60 == 0);
    CHECK(channel_of_64 == 1);
}

TEST_CASE("to_svg counts one element per term") {
    CHECK(score::to_svg({}, 100, 100).find("<circle") == std::string::npos);

    kets::VisualDecomposition d;
    d.terms.push_back({{0.5, 0.5, 0.1, 0.0, 0.01}, {kets::VisualKetKind::Dot, 0.0}});
    d.terms.push_back({{0.3, 0.3, 0.2, 0.4, 0.01}, {kets::VisualKetKind::Segment, 0.0}});
    d.terms.push_back({{0.7, 0.6, 0.2, 1.0, 0.01}, {kets::VisualKetKind::Arc, 1.2}});
    d.envelope_count = 1;
    const auto svg = score::to_svg(d, 200, 200);

    auto count = [&](const std::string& needle) {
        std::size_t n = 0, pos = 0;
        while ((pos = svg.find(needle, pos)) != std::string::npos) {
            ++n;
            pos += needle.size();
        }
        return n;
    };
    CHECK(count("<circle") == 1);
    CHECK(count("<line") == 1);
    CHECK(count("<path") == 1);
    CHECK(svg.find("viewBox=\"0 0 200 200\"") != std::string::npos);
    // Envelope and pattern terms carry different stroke colors.
    CHECK(svg.find("#1f77b4") != std::string::npos);
    CHECK(svg.find("#d62728") != std::string::npos);
}

TEST_CASE("to_svg centers a dot by the raster size") {
    kets::VisualDecomposition d;
    d.terms.push_back({{0.5, 0.5, 0.1, 0.0, 0.01}, {kets::VisualKetKind::Dot, 0.0}});
    const auto svg = score::to_svg(d, 200, 200);
    CHECK(svg.find("cx=\"100.000\"") != std::string::npos);
    CHECK(svg.find("cy=\"100.000\"") != std::string::npos);
}

TEST_CASE("decomposition documents round-trip exactly") {
    std::mt19937 rng(97);
    for (int i = 0; i < 500; ++i) {
        const auto d = ts::random_decomposition(rng);
        const auto text = score::serialize(d, 640, 480);
        const auto back = score::deserialize_decomposition(text);
        CHECK(back.width_hint == 640);
        CHECK(back.height_hint == 480);
        REQUIRE(back.decomposition.terms.size() == d.terms.size());
        CHECK(back.decomposition.envelope_count == d.envelope_count);
        for (std::size_t t = 0; t < d.terms.size(); ++t) {
            CHECK(back.decomposition.terms[t].ket.kind == d.terms[t].ket.kind);
            CHECK(back.decomposition.terms[t].ket.sweep == d.terms[t].ket.sweep);
            CHECK(back.decomposition.terms[t].placement.x == d.terms[t].placement.x);
            CHECK(back.decomposition.terms[t].placement.y == d.terms[t].placement.y);
            CHECK(back.decomposition.terms[t].placement.scale == d.terms[t].placement.scale);
            CHECK(back.decomposition.terms[t].placement.rotation == d.terms[t].placement.rotation);
            CHECK(back.decomposition.terms[t].placement.thickness ==
                  d.terms[t].placement.thickness);
        }
    }
}

TEST_CASE("sound documents round-trip exactly") {
    std::mt19937 rng(101);
    for (int i = 0; i < 100; ++i) {
        const auto s = random_sound(rng);
        const auto back = score::deserialize_sound(score::serialize(s));
        CHECK(back.total_beats == s.total_beats);
        CHECK(back.envelope_count == s.envelope_count);
        REQUIRE(back.events.size() == s.events.size());
        for (std::size_t e = 0; e < s.events.size(); ++e) {
            CHECK(back.events[e].onset == s.events[e].onset);
            CHECK(back.events[e].duration == s.events[e].duration);
            CHECK(back.events[e].pitch == s.events[e].pitch);
            CHECK(back.events[e].velocity == s.events[e].velocity);
            CHECK(back.events[e].articulation == s.events[e].articulation);
            CHECK(back.events[e].source_term == s.events[e].source_term);
        }
    }
}

TEST_CASE("deserialize never crashes on mangled input") {
    std::mt19937 rng(103);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> len(0, 200);
    for (int i = 0; i < 300; ++i) {
        std::string garbage;
        const int n = len(rng);
        for (int b = 0; b < n; ++b) garbage.push_back(static_cast<char>(byte(rng)));
        CHECK_THROWS_AS(score::deserialize_decomposition(garbage), score::ParseError);
        CHECK_THROWS_AS(score::deserialize_sound(garbage), score::ParseError);
    }

    // Mutated copies of a valid document parse or reject, never crash.
    const auto d = ts::random_decomposition(rng, 2, 4);
    const std::string valid = score::serialize(d, 100, 100);
    std::uniform_int_distribution<std::size_t> pos(0, valid.size() - 1);
    for (int i = 0; i < 300; ++i) {
        std::string mutated = valid;
        mutated[pos(rng)] = static_cast<char>(byte(rng));
        try {
            score::deserialize_decomposition(mutated);
        } catch (const score::ParseError&) {
        }
    }
}

TEST_CASE("deserialize rejects malformed documents naming the field") {
    using score::deserialize_decomposition;
    using score::ParseError;

    CHECK_THROWS_WITH_AS(deserialize_decomposition("{\"width_hint\":1}"),
                         doctest::Contains("version"), ParseError);
    CHECK_THROWS_WITH_AS(
        deserialize_decomposition(
            "{\"version\":1,\"width_hint\":10,\"height_hint\":10,\"envelope_count\":2,"
            "\"terms\":[{\"kind\":\"dot\",\"x\":0.5,\"y\":0.5,\"scale\":0.1,"
            "\"rotation\":0.0,\"thickness\":0.1}]}"),
        doctest::Contains("envelope_count"), ParseError);
    CHECK_THROWS_WITH_AS(
        deserialize_decomposition(
            "{\"version\":1,\"width_hint\":10,\"height_hint\":10,\"envelope_count\":0,"
            "\"terms\":[],\"extra\":true}"),
        doctest::Contains("extra"), ParseError);
    CHECK_THROWS_WITH_AS(
        deserialize_decomposition(
            "{\"version\":1,\"width_hint\":10,\"height_hint\":10,\"envelope_count\":0,"
            "\"terms\":[{\"kind\":\"dot\",\"sweep\":1.0,\"x\":0.5,\"y\":0.5,\"scale\":0.1,"
            "\"rotation\":0.0,\"thickness\":0.1}]}"),
        doctest::Contains("sweep"), ParseError);
    CHECK_THROWS_AS(deserialize_decomposition("not json at all"), ParseError);
    CHECK_THROWS_WITH_AS(score::deserialize_sound("{\"total_beats\":4}"),
                         doctest::Contains("version"), ParseError);
}
