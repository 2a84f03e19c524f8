#include <set>
#include <string>

#include <json.hpp>

#include "shapetone/score.hpp"

namespace shapetone::score {

namespace {

using nlohmann::json;

constexpr int kDocumentVersion = 1;

std::string kind_name(kets::VisualKetKind k) {
    switch (k) {
        case kets::VisualKetKind::Dot: return "dot";
        case kets::VisualKetKind::Segment: return "segment";
        case kets::VisualKetKind::Arc: return "arc";
    }
    return "dot";
}

kets::VisualKetKind kind_from(const std::string& name) {
    if (name == "dot") return kets::VisualKetKind::Dot;
    if (name == "segment") return kets::VisualKetKind::Segment;
    if (name == "arc") return kets::VisualKetKind::Arc;
    throw ParseError("field 'kind': unknown value '" + name + "'");
}

std::string articulation_name(transform::Articulation a) {
    switch (a) {
        case transform::Articulation::Legato: return "legato";
        case transform::Articulation::Staccato: return "staccato";
        case transform::Articulation::Staccatissimo: return "staccatissimo";
    }
    return "staccato";
}

transform::Articulation articulation_from(const std::string& name) {
    if (name == "legato") return transform::Articulation::Legato;
    if (name == "staccato") return transform::Articulation::Staccato;
    if (name == "staccatissimo") return transform::Articulation::Staccatissimo;
    throw ParseError("field 'articulation': unknown value '" + name + "'");
}

json parse_document(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw ParseError("document is not a JSON object");
    return doc;
}

void check_fields(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.contains(key))
            throw ParseError("unknown field '" + key + "' in " + where);
    }
}

void require_version(const json& doc) {
    if (!doc.contains("version")) throw ParseError("missing field 'version'");
    if (!doc["version"].is_number_integer() || doc["version"].get<int>() != kDocumentVersion)
        throw ParseError("field 'version': unsupported value");
}

double require_number(const json& obj, const std::string& field) {
    if (!obj.contains(field)) throw ParseError("missing field '" + field + "'");
    if (!obj[field].is_number()) throw ParseError("field '" + field + "': expected a number");
    return obj[field].get<double>();
}

long require_integer(const json& obj, const std::string& field) {
    if (!obj.contains(field)) throw ParseError("missing field '" + field + "'");
    if (!obj[field].is_number_integer())
        throw ParseError("field '" + field + "': expected an integer");
    return obj[field].get<long>();
}

std::string require_string(const json& obj, const std::string& field) {
    if (!obj.contains(field)) throw ParseError("missing field '" + field + "'");
    if (!obj[field].is_string()) throw ParseError("field '" + field + "': expected a string");
    return obj[field].get<std::string>();
}

void require_range(double v, double lo, double hi, bool lo_open, const std::string& field) {
    const bool ok = (lo_open ? v > lo : v >= lo) && v <= hi;
    if (!ok) throw ParseError("field '" + field + "': value out of range");
}

}  // namespace

std::string serialize(const kets::VisualDecomposition& d, int width_hint, int height_hint) {
    json doc;
    doc["version"] = kDocumentVersion;
    doc["width_hint"] = width_hint;
    doc["height_hint"] = height_hint;
    doc["envelope_count"] = d.envelope_count;
    doc["terms"] = json::array();
    for (const auto& [p, ket] : d.terms) {
        json term;
        term["kind"] = kind_name(ket.kind);
        if (ket.kind == kets::VisualKetKind::Arc) term["sweep"] = ket.sweep;
        term["x"] = p.x;
        term["y"] = p.y;
        term["scale"] = p.scale;
        term["rotation"] = p.rotation;
        term["thickness"] = p.thickness;
        doc["terms"].push_back(std::move(term));
    }
    return doc.dump(2) + "\n";
}

std::string serialize(const transform::SoundDecomposition& s) {
    json doc;
    doc["version"] = kDocumentVersion;
    doc["total_beats"] = s.total_beats;
    doc["envelope_count"] = s.envelope_count;
    doc["events"] = json::array();
    for (const auto& ev : s.events) {
        json e;
        e["onset"] = ev.onset;
        e["duration"] = ev.duration;
        e["pitch"] = ev.pitch;
        e["velocity"] = ev.velocity;
        e["articulation"] = articulation_name(ev.articulation);
        e["source_term"] = ev.source_term;
        doc["events"].push_back(std::move(e));
    }
    return doc.dump(2) + "\n";
}

DeserializedDecomposition deserialize_decomposition(const std::string& text) {
    const json doc = parse_document(text);
    check_fields(doc, {"version", "width_hint", "height_hint", "envelope_count", "terms"},
                 "document");
    require_version(doc);

    DeserializedDecomposition out;
    out.width_hint = static_cast<int>(require_integer(doc, "width_hint"));
    out.height_hint = static_cast<int>(require_integer(doc, "height_hint"));
    const long envelope = require_integer(doc, "envelope_count");
    if (envelope < 0) throw ParseError("field 'envelope_count': value out of range");

    if (!doc.contains("terms") || !doc["terms"].is_array())
        throw ParseError("field 'terms': expected an array");
    for (const auto& term : doc["terms"]) {
        if (!term.is_object()) throw ParseError("field 'terms': expected objects");
        check_fields(term, {"kind", "sweep", "x", "y", "scale", "rotation", "thickness"}, "term");

        kets::VisualKet ket;
        ket.kind = kind_from(require_string(term, "kind"));
        if (term.contains("sweep")) {
            if (ket.kind != kets::VisualKetKind::Arc)
                throw ParseError("field 'sweep': only valid for arc terms");
            ket.sweep = require_number(term, "sweep");
            require_range(ket.sweep, 0.0, kTwoPi, true, "sweep");
        } else if (ket.kind == kets::VisualKetKind::Arc) {
            throw ParseError("missing field 'sweep'");
        }

        kets::KetPlacement p;
        p.x = require_number(term, "x");
        require_range(p.x, 0.0, 1.0, false, "x");
        p.y = require_number(term, "y");
        require_range(p.y, 0.0, 1.0, false, "y");
        p.scale = require_number(term, "scale");
        require_range(p.scale, 0.0, 1.0, true, "scale");
        p.rotation = require_number(term, "rotation");
        if (p.rotation < 0.0 || p.rotation >= kTwoPi)
            throw ParseError("field 'rotation': value out of range");
        p.thickness = require_number(term, "thickness");
        require_range(p.thickness, 0.0, 1.0, true, "thickness");
        out.decomposition.terms.push_back({p, ket});
    }

    if (static_cast<std::size_t>(envelope) > out.decomposition.terms.size())
        throw ParseError("field 'envelope_count': exceeds term count");
    out.decomposition.envelope_count = static_cast<std::size_t>(envelope);
    return out;
}

transform::SoundDecomposition deserialize_sound(const std::string& text) {
    const json doc = parse_document(text);
    check_fields(doc, {"version", "total_beats", "envelope_count", "events"}, "document");
    require_version(doc);

    transform::SoundDecomposition out;
    out.total_beats = require_number(doc, "total_beats");
    if (out.total_beats <= 0.0) throw ParseError("field 'total_beats': value out of range");
    const long envelope = require_integer(doc, "envelope_count");
    if (envelope < 0) throw ParseError("field 'envelope_count': value out of range");
    out.envelope_count = static_cast<std::size_t>(envelope);

    if (!doc.contains("events") || !doc["events"].is_array())
        throw ParseError("field 'events': expected an array");
    for (const auto& e : doc["events"]) {
        if (!e.is_object()) throw ParseError("field 'events': expected objects");
        check_fields(e, {"onset", "duration", "pitch", "velocity", "articulation", "source_term"},
                     "event");
        transform::SoundEvent ev;
        ev.onset = require_number(e, "onset");
        if (ev.onset < 0.0) throw ParseError("field 'onset': value out of range");
        ev.duration = require_number(e, "duration");
        if (ev.duration <= 0.0) throw ParseError("field 'duration': value out of range");
        ev.pitch = static_cast<int>(require_integer(e, "pitch"));
        if (ev.pitch < 0 || ev.pitch > 127) throw ParseError("field 'pitch': value out of range");
        ev.velocity = static_cast<int>(require_integer(e, "velocity"));
        if (ev.velocity < 1 || ev.velocity > 127)
            throw ParseError("field 'velocity': value out of range");
        ev.articulation = articulation_from(require_string(e, "articulation"));
        const long source = require_integer(e, "source_term");
        if (source < 0) throw ParseError("field 'source_term': value out of range");
        ev.source_term = static_cast<std::size_t>(source);
        out.events.push_back(ev);
    }
    return out;
}

}  // namespace shapetone::score
