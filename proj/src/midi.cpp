#include <algorithm>
#include <cmath>

#include "shapetone/score.hpp"

namespace shapetone::score {

int transpose_to_range(int pitch, int lo, int hi) {
    int p = pitch;
    while (p > hi) p -= 12;
    while (p < lo) p += 12;
    if (p <= hi) return p;
    // Range narrower than an octave and no fold lands inside: clamp to the
    // octave-nearest bound.
    const int d_hi = p - hi;
    const int d_lo = lo - (p - 12);
    return d_hi <= d_lo ? hi : lo;
}

std::pair<int, int> instrument_comfort_range(int program) {
    // Editorial table of comfortable written ranges for common GM programs.
    switch (program) {
        case 0: return {21, 108};   // acoustic grand piano
        case 24: return {40, 83};   // nylon guitar
        case 32: return {28, 60};   // acoustic bass
        case 40: return {55, 96};   // violin
        case 42: return {36, 76};   // cello
        case 56: return {54, 82};   // trumpet
        case 65: return {49, 80};   // alto sax
        case 73: return {60, 96};   // flute
        default: return {0, 127};
    }
}

namespace {

void put_u16(std::vector<std::uint8_t>& out, unsigned v) {
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_u32(std::vector<std::uint8_t>& out, unsigned long v) {
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_varlen(std::vector<std::uint8_t>& out, long tick) {
    unsigned long v = static_cast<unsigned long>(std::max(0L, tick));
    std::uint8_t buf[5];
    int n = 0;
    buf[n++] = static_cast<std::uint8_t>(v & 0x7F);
    while ((v >>= 7) != 0) buf[n++] = static_cast<std::uint8_t>((v & 0x7F) | 0x80);
    while (n > 0) out.push_back(buf[--n]);
}

struct MidiEvent {
    long tick;
    int order;  // note-offs sort before note-ons at the same tick
    int pitch;
    int channel;
    std::uint8_t status;
    std::uint8_t data1;
    std::uint8_t data2;
};

void append_track(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& body) {
    out.push_back('M');
    out.push_back('T');
    out.push_back('r');
    out.push_back('k');
    put_u32(out, body.size());
    out.insert(out.end(), body.begin(), body.end());
}

}  // namespace

std::vector<std::uint8_t> to_midi(const transform::SoundDecomposition& s,
                                  const MidiDocument& doc) {
    std::vector<MidiEvent> events;
    for (const auto& ev : s.events) {
        const int channel = ev.source_term < s.envelope_count ? 0 : 1;
        const long on = std::lround(ev.onset * doc.ppq);
        long off = std::lround((ev.onset + ev.duration) * doc.ppq);
        if (off <= on) off = on + 1;
        const std::uint8_t pitch = static_cast<std::uint8_t>(std::clamp(ev.pitch, 0, 127));
        const std::uint8_t vel = static_cast<std::uint8_t>(std::clamp(ev.velocity, 1, 127));
        events.push_back({on, 1, ev.pitch, channel,
                          static_cast<std::uint8_t>(0x90 | channel), pitch, vel});
        events.push_back({off, 0, ev.pitch, channel,
                          static_cast<std::uint8_t>(0x80 | channel), pitch, 0});
    }
    std::stable_sort(events.begin(), events.end(), [](const MidiEvent& a, const MidiEvent& b) {
        if (a.tick != b.tick) return a.tick < b.tick;
        if (a.order != b.order) return a.order < b.order;
        if (a.pitch != b.pitch) return a.pitch < b.pitch;
        return a.channel < b.channel;
    });

    // Tempo track.
    std::vector<std::uint8_t> tempo;
    put_varlen(tempo, 0);
    tempo.push_back(0xFF);
    tempo.push_back(0x51);
    tempo.push_back(0x03);
    tempo.push_back(static_cast<std::uint8_t>((doc.tempo_us_per_quarter >> 16) & 0xFF));
    tempo.push_back(static_cast<std::uint8_t>((doc.tempo_us_per_quarter >> 8) & 0xFF));
    tempo.push_back(static_cast<std::uint8_t>(doc.tempo_us_per_quarter & 0xFF));
    put_varlen(tempo, 0);
    tempo.push_back(0xFF);
    tempo.push_back(0x2F);
    tempo.push_back(0x00);

    // Note track: program changes on both channels, then the notes.
    std::vector<std::uint8_t> notes;
    const std::uint8_t program =
        static_cast<std::uint8_t>(std::clamp(doc.instrument_program, 0, 127));
    for (int ch = 0; ch < 2; ++ch) {
        put_varlen(notes, 0);
        notes.push_back(static_cast<std::uint8_t>(0xC0 | ch));
        notes.push_back(program);
    }
    long cursor = 0;
    for (const auto& ev : events) {
        put_varlen(notes, ev.tick - cursor);
        cursor = ev.tick;
        notes.push_back(ev.status);
        notes.push_back(ev.data1);
        notes.push_back(ev.data2);
    }
    put_varlen(notes, 0);
    notes.push_back(0xFF);
    notes.push_back(0x2F);
    notes.push_back(0x00);

    std::vector<std::uint8_t> out;
    out.reserve(14 + tempo.size() + notes.size() + 16);
    out.push_back('M');
    out.push_back('T');
    out.push_back('h');
    out.push_back('d');
    put_u32(out, 6);
    put_u16(out, 1);  // format 1
    put_u16(out, 2);  // tempo track + note track
    put_u16(out, static_cast<unsigned>(doc.ppq));
    append_track(out, tempo);
    append_track(out, notes);
    return out;
}

}  // namespace shapetone::score
