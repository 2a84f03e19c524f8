#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapetone/kets.hpp"
#include "shapetone/transform.hpp"

namespace shapetone::score {

// Raised when a serialized document is malformed; the message names the
// offending field.
class ParseError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Standard MIDI File parameters. Envelope events go to channel 0, pattern
// events to channel 1, preserving the two streams for later refinement.
struct MidiDocument {
    int ppq = 480;                 // ticks per quarter note
    int instrument_program = 0;    // General MIDI program 0..127
    int tempo_us_per_quarter = 500000;
};

// Octave-folds the pitch into [lo, hi]; when the range is narrower than an
// octave and no fold lands inside, clamps to the octave-nearest bound.
int transpose_to_range(int pitch, int lo, int hi);

// Comfortable written range for a few common General MIDI programs,
// defaulting to the full MIDI range for anything unlisted.
std::pair<int, int> instrument_comfort_range(int program);

// Emits a format 1 SMF with a tempo track and a note track. No running
// status, plain status bytes throughout, so output is byte-reproducible.
std::vector<std::uint8_t> to_midi(const transform::SoundDecomposition& s,
                                  const MidiDocument& doc);

// SVG 1.1 rendering of a decomposition: one shape element per term, with
// envelope and pattern terms stroked in different colors.
std::string to_svg(const kets::VisualDecomposition& d, int width, int height);

// Canonical JSON serialization of a visual decomposition. width_hint and
// height_hint carry the source raster size for later rendering.
std::string serialize(const kets::VisualDecomposition& d, int width_hint, int height_hint);
std::string serialize(const transform::SoundDecomposition& s);

struct DeserializedDecomposition {
    kets::VisualDecomposition decomposition;
    int width_hint = 0;
    int height_hint = 0;
};

DeserializedDecomposition deserialize_decomposition(const std::string& text);
transform::SoundDecomposition deserialize_sound(const std::string& text);

}  // namespace shapetone::score
