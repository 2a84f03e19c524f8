#pragma once

#include <vector>

#include "shapetone/kets.hpp"

namespace shapetone::transform {

// Playing technique, fixed per primitive kind: dots sound staccato, arcs
// legato, straight segments staccatissimo.
enum class Articulation { Legato, Staccato, Staccatissimo };

enum class ScaleSnap { Chromatic, Major, Minor };

struct SoundEvent {
    double onset = 0.0;     // beats
    double duration = 0.0;  // beats, already shortened by the articulation gate
    int pitch = 60;         // MIDI note 0..127
    int velocity = 64;      // 1..127
    Articulation articulation = Articulation::Staccato;
    std::size_t source_term = 0;  // index into the visual decomposition
};

struct SoundDecomposition {
    std::vector<SoundEvent> events;
    // Events whose source_term is below this count belong to the envelope.
    std::size_t envelope_count = 0;
    double total_beats = 0.0;
};

struct MappingConfig {
    double total_beats = 16.0;
    int pitch_lo = 48;
    int pitch_hi = 84;
    bool enable_progression = true;
    bool enable_interval = true;
    bool enable_dynamics = true;
    bool enable_pauses = true;
    int notes_per_unit_scale = 8;
    ScaleSnap scale_snap = ScaleSnap::Chromatic;
    int interval_max = 12;
};

// The per-term dictionary: a dot becomes one staccato note, a segment a
// staccatissimo run stepping by the interval rule (collapsing to a cluster
// when near-vertical), an arc a legato rise-then-fall melody. Horizontal
// position maps to onset, height to pitch, scale to the time span,
// thickness to velocity.
std::vector<SoundEvent> expand_term(const kets::KetPlacement& placement,
                                    const kets::VisualKet& ket, const MappingConfig& cfg);

// Applies expand_term to every term in order. With pauses enabled the
// image's horizontal gaps become rests; disabled, the per-term blocks are
// compacted back to back.
SoundDecomposition apply(const kets::VisualDecomposition& d, const MappingConfig& cfg);

// Chronophotography: each snapshot occupies one consecutive block of
// total_beats / count.
SoundDecomposition apply_sequence(const std::vector<kets::VisualDecomposition>& snapshots,
                                  const MappingConfig& cfg);

// Mirrors every event in time; pitches, durations and dynamics survive.
SoundDecomposition retrograde(const SoundDecomposition& s);

// Cosine similarity over (articulation x onset-quantile x pitch-band)
// histograms; 1 for identical decompositions, 0 for unrelated ones.
double sound_distance(const SoundDecomposition& a, const SoundDecomposition& b);

}  // namespace shapetone::transform
