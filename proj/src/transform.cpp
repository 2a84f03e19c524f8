#include "shapetone/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace shapetone::transform {

namespace {

constexpr double kClusterTolerance = 0.1;  // rad from vertical
constexpr double kViolentStaccatoScale = 0.25;

// Same octave-fold rule as score::transpose_to_range: nearest fold first,
// then the octave-nearest bound when the range is narrower than an octave.
int fold_into_range(int pitch, int lo, int hi) {
    int p = pitch;
    while (p > hi) p -= 12;
    while (p < lo) p += 12;
    if (p <= hi) return p;
    const int d_hi = p - hi;
    const int d_lo = lo - (p - 12);
    return d_hi <= d_lo ? hi : lo;
}

bool in_scale(ScaleSnap snap, int pitch) {
    static constexpr std::array<bool, 12> major{true, false, true, false, true, true,
                                                false, true, false, true, false, true};
    static constexpr std::array<bool, 12> minor{true, false, true, true, false, true,
                                                false, true, true, false, true, false};
    const int pc = ((pitch % 12) + 12) % 12;
    return snap == ScaleSnap::Major ? major[static_cast<std::size_t>(pc)]
                                    : minor[static_cast<std::size_t>(pc)];
}

// Nearest in-range scale tone, ties resolved downward.
int snap_to_scale(int pitch, ScaleSnap snap, int lo, int hi) {
    if (snap == ScaleSnap::Chromatic) return pitch;
    for (int d = 0; d <= 12; ++d) {
        const int down = pitch - d;
        if (down >= lo && down <= hi && in_scale(snap, down)) return down;
        const int up = pitch + d;
        if (d > 0 && up >= lo && up <= hi && in_scale(snap, up)) return up;
    }
    return pitch;
}

double articulation_gate(Articulation art, double scale) {
    switch (art) {
        case Articulation::Legato: return 1.0;
        case Articulation::Staccato: return 0.5;
        case Articulation::Staccatissimo:
            // The longer the stroke, the more violent the staccato.
            return scale > kViolentStaccatoScale ? 0.15 : 0.25;
    }
    return 0.5;
}

Articulation articulation_for(kets::VisualKetKind kind) {
    switch (kind) {
        case kets::VisualKetKind::Dot: return Articulation::Staccato;
        case kets::VisualKetKind::Segment: return Articulation::Staccatissimo;
        case kets::VisualKetKind::Arc: return Articulation::Legato;
    }
    return Articulation::Staccato;
}

}  // namespace

std::vector<SoundEvent> expand_term(const kets::KetPlacement& placement,
                                    const kets::VisualKet& ket, const MappingConfig& cfg) {
    const Articulation art = articulation_for(ket.kind);
    const int n = ket.kind == kets::VisualKetKind::Dot
                      ? 1
                      : std::max(2L, std::lround(cfg.notes_per_unit_scale * placement.scale * 4.0));

    const double span = placement.scale * cfg.total_beats;
    const double onset0 = std::max(0.0, std::min(placement.x, 1.0 - placement.scale)) *
                          cfg.total_beats;
    const double slot = span / n;

    const double base_f = cfg.pitch_lo + (1.0 - placement.y) * (cfg.pitch_hi - cfg.pitch_lo);
    const int base = snap_to_scale(
        fold_into_range(static_cast<int>(std::lround(base_f)), cfg.pitch_lo, cfg.pitch_hi),
        cfg.scale_snap, cfg.pitch_lo, cfg.pitch_hi);

    const double angle_h = angle_from_horizontal(placement.rotation);
    const int step = cfg.enable_interval
                         ? std::max(1L, std::lround(cfg.interval_max * (angle_h / (kPi / 2.0))))
                         : 1;
    const int velocity =
        cfg.enable_dynamics
            ? std::clamp(static_cast<int>(1 + std::lround(126.0 * placement.thickness)), 1, 127)
            : 64;

    const bool cluster = ket.kind == kets::VisualKetKind::Segment &&
                         (std::abs(placement.rotation - kPi / 2.0) < kClusterTolerance ||
                          std::abs(placement.rotation - 3.0 * kPi / 2.0) < kClusterTolerance);
    // Ascending strokes (dy < 0 on screen) run upward in pitch.
    const int direction =
        cfg.enable_progression ? (std::sin(placement.rotation) < 0.0 ? 1 : -1) : 1;

    std::vector<SoundEvent> events;
    events.reserve(static_cast<std::size_t>(n));
    const double gate = articulation_gate(art, placement.scale);
    for (int k = 0; k < n; ++k) {
        SoundEvent ev;
        ev.articulation = art;
        ev.velocity = velocity;
        ev.onset = cluster ? onset0 : onset0 + k * slot;
        ev.duration = gate * slot;
        if (ev.onset + ev.duration > cfg.total_beats)
            ev.duration = cfg.total_beats - ev.onset;

        double offset = 0.0;
        if (ket.kind == kets::VisualKetKind::Segment) {
            // Stepped run centered on the base pitch; reversing the stroke
            // reverses the run but keeps the same pitches.
            offset = direction * (k - (n - 1) / 2.0) * step;
        } else if (ket.kind == kets::VisualKetKind::Arc) {
            offset = static_cast<double>(step) * std::min(k, n - 1 - k);
        }
        ev.pitch = fold_into_range(static_cast<int>(std::lround(base + offset)), cfg.pitch_lo,
                                   cfg.pitch_hi);
        events.push_back(ev);
    }
    return events;
}

SoundDecomposition apply(const kets::VisualDecomposition& d, const MappingConfig& cfg) {
    SoundDecomposition out;
    out.total_beats = cfg.total_beats;
    out.envelope_count = d.envelope_count;

    if (cfg.enable_pauses) {
        for (std::size_t i = 0; i < d.terms.size(); ++i) {
            for (SoundEvent ev : expand_term(d.terms[i].placement, d.terms[i].ket, cfg)) {
                ev.source_term = i;
                out.events.push_back(ev);
            }
        }
        return out;
    }

    // Pauses disabled: squeeze the per-term blocks back to back so the
    // image's horizontal gaps stop producing rests.
    struct Block {
        std::size_t term;
        std::vector<SoundEvent> events;
        double start = 0.0;
        double extent = 0.0;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < d.terms.size(); ++i) {
        Block b{i, expand_term(d.terms[i].placement, d.terms[i].ket, cfg), 0.0, 0.0};
        if (b.events.empty()) continue;
        b.start = b.events.front().onset;
        for (const auto& ev : b.events) {
            b.start = std::min(b.start, ev.onset);
            b.extent = std::max(b.extent, ev.onset + ev.duration);
        }
        b.extent -= b.start;
        blocks.push_back(std::move(b));
    }
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const Block& a, const Block& b) { return a.start < b.start; });
    double cursor = 0.0;
    for (auto& block : blocks) {
        for (SoundEvent ev : block.events) {
            ev.onset = ev.onset - block.start + cursor;
            if (ev.onset + ev.duration > cfg.total_beats) {
                ev.onset = std::max(0.0, cfg.total_beats - ev.duration);
                if (ev.onset + ev.duration > cfg.total_beats)
                    ev.duration = cfg.total_beats - ev.onset;
            }
            ev.source_term = block.term;
            out.events.push_back(ev);
        }
        cursor += block.extent;
    }
    return out;
}

SoundDecomposition apply_sequence(const std::vector<kets::VisualDecomposition>& snapshots,
                                  const MappingConfig& cfg) {
    SoundDecomposition out;
    out.total_beats = cfg.total_beats;
    if (snapshots.empty()) return out;
    out.envelope_count = snapshots.front().envelope_count;

    const double block = cfg.total_beats / static_cast<double>(snapshots.size());
    MappingConfig block_cfg = cfg;
    block_cfg.total_beats = block;

    std::size_t term_offset = 0;
    for (std::size_t t = 0; t < snapshots.size(); ++t) {
        const SoundDecomposition part = apply(snapshots[t], block_cfg);
        for (SoundEvent ev : part.events) {
            ev.onset += static_cast<double>(t) * block;
            ev.source_term += term_offset;
            out.events.push_back(ev);
        }
        term_offset += snapshots[t].terms.size();
    }
    return out;
}

SoundDecomposition retrograde(const SoundDecomposition& s) {
    SoundDecomposition out = s;
    for (auto& ev : out.events) ev.onset = s.total_beats - ev.onset - ev.duration;
    return out;
}

namespace {

constexpr int kQuantiles = 8;
constexpr int kPitchBands = 4;

std::array<double, 3 * kQuantiles * kPitchBands> sound_features(const SoundDecomposition& s) {
    std::array<double, 3 * kQuantiles * kPitchBands> bins{};
    const std::size_t n = s.events.size();
    if (n == 0) return bins;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return s.events[a].onset < s.events[b].onset;
    });

    for (std::size_t rank = 0; rank < n; ++rank) {
        const SoundEvent& ev = s.events[order[rank]];
        const int q = std::min<int>(static_cast<int>(rank * kQuantiles / n), kQuantiles - 1);
        const int band = std::clamp(ev.pitch / 32, 0, kPitchBands - 1);
        const int art = static_cast<int>(ev.articulation);
        bins[static_cast<std::size_t>((art * kQuantiles + q) * kPitchBands + band)] += 1.0;
    }
    return bins;
}

}  // namespace

double sound_distance(const SoundDecomposition& a, const SoundDecomposition& b) {
    if (a.events.empty() && b.events.empty()) return 1.0;
    if (a.events.empty() || b.events.empty()) return 0.0;
    const auto fa = sound_features(a);
    const auto fb = sound_features(b);
    double dp = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        dp += fa[i] * fb[i];
        na += fa[i] * fa[i];
        nb += fb[i] * fb[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dp / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace shapetone::transform
