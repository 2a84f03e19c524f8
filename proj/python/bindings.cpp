#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shapetone/filter.hpp"
#include "shapetone/kets.hpp"
#include "shapetone/score.hpp"
#include "shapetone/transform.hpp"

namespace py = pybind11;

using namespace shapetone;

PYBIND11_MODULE(shapetone, m) {
    m.doc() = "Image sonification: decompose drawings into dots, segments and arcs, "
              "map them to note events and emit Standard MIDI Files.";

    py::register_exception<filter::DecodeError>(m, "DecodeError");
    py::register_exception<filter::NoObjectsError>(m, "NoObjectsError");
    py::register_exception<score::ParseError>(m, "DocumentParseError");

    py::enum_<kets::VisualKetKind>(m, "VisualKetKind")
        .value("Dot", kets::VisualKetKind::Dot)
        .value("Segment", kets::VisualKetKind::Segment)
        .value("Arc", kets::VisualKetKind::Arc);

    py::class_<kets::VisualKet>(m, "VisualKet")
        .def(py::init<>())
        .def(py::init([](kets::VisualKetKind kind, double sweep) {
                 return kets::VisualKet{kind, sweep};
             }),
             py::arg("kind"), py::arg("sweep") = 0.0)
        .def_readwrite("kind", &kets::VisualKet::kind)
        .def_readwrite("sweep", &kets::VisualKet::sweep);

    py::class_<kets::KetPlacement>(m, "KetPlacement")
        .def(py::init<>())
        .def(py::init([](double x, double y, double scale, double rotation, double thickness) {
                 return kets::KetPlacement{x, y, scale, rotation, thickness};
             }),
             py::arg("x"), py::arg("y"), py::arg("scale") = 0.1, py::arg("rotation") = 0.0,
             py::arg("thickness") = 0.01)
        .def_readwrite("x", &kets::KetPlacement::x)
        .def_readwrite("y", &kets::KetPlacement::y)
        .def_readwrite("scale", &kets::KetPlacement::scale)
        .def_readwrite("rotation", &kets::KetPlacement::rotation)
        .def_readwrite("thickness", &kets::KetPlacement::thickness);

    py::class_<kets::DecompositionTerm>(m, "DecompositionTerm")
        .def(py::init<>())
        .def(py::init([](const kets::KetPlacement& p, const kets::VisualKet& k) {
                 return kets::DecompositionTerm{p, k};
             }),
             py::arg("placement"), py::arg("ket"))
        .def_readwrite("placement", &kets::DecompositionTerm::placement)
        .def_readwrite("ket", &kets::DecompositionTerm::ket);

    py::class_<kets::VisualDecomposition>(m, "VisualDecomposition")
        .def(py::init<>())
        .def_readwrite("terms", &kets::VisualDecomposition::terms)
        .def_readwrite("envelope_count", &kets::VisualDecomposition::envelope_count)
        .def("__len__", [](const kets::VisualDecomposition& d) { return d.terms.size(); });

    py::class_<kets::BinaryRaster>(m, "BinaryRaster")
        .def_readonly("width", &kets::BinaryRaster::width)
        .def_readonly("height", &kets::BinaryRaster::height)
        .def_readonly("pixels", &kets::BinaryRaster::pixels);

    py::class_<filter::ImageRaster>(m, "ImageRaster")
        .def(py::init<>())
        .def(py::init([](int width, int height, std::vector<std::uint8_t> pixels) {
                 return filter::ImageRaster{width, height, std::move(pixels)};
             }),
             py::arg("width"), py::arg("height"), py::arg("pixels"))
        .def_readwrite("width", &filter::ImageRaster::width)
        .def_readwrite("height", &filter::ImageRaster::height)
        .def_readwrite("pixels", &filter::ImageRaster::pixels);

    py::class_<filter::MinimalKetResult>(m, "MinimalKetResult")
        .def_readonly("n_star", &filter::MinimalKetResult::n_star)
        .def_readonly("threshold_reached", &filter::MinimalKetResult::threshold_reached)
        .def_readonly("curve", &filter::MinimalKetResult::curve);

    py::enum_<transform::Articulation>(m, "Articulation")
        .value("Legato", transform::Articulation::Legato)
        .value("Staccato", transform::Articulation::Staccato)
        .value("Staccatissimo", transform::Articulation::Staccatissimo);

    py::enum_<transform::ScaleSnap>(m, "ScaleSnap")
        .value("Chromatic", transform::ScaleSnap::Chromatic)
        .value("Major", transform::ScaleSnap::Major)
        .value("Minor", transform::ScaleSnap::Minor);

    py::class_<transform::SoundEvent>(m, "SoundEvent")
        .def(py::init<>())
        .def_readwrite("onset", &transform::SoundEvent::onset)
        .def_readwrite("duration", &transform::SoundEvent::duration)
        .def_readwrite("pitch", &transform::SoundEvent::pitch)
        .def_readwrite("velocity", &transform::SoundEvent::velocity)
        .def_readwrite("articulation", &transform::SoundEvent::articulation)
        .def_readwrite("source_term", &transform::SoundEvent::source_term);

    py::class_<transform::SoundDecomposition>(m, "SoundDecomposition")
        .def(py::init<>())
        .def_readwrite("events", &transform::SoundDecomposition::events)
        .def_readwrite("envelope_count", &transform::SoundDecomposition::envelope_count)
        .def_readwrite("total_beats", &transform::SoundDecomposition::total_beats)
        .def("__len__", [](const transform::SoundDecomposition& s) { return s.events.size(); });

    py::class_<transform::MappingConfig>(m, "MappingConfig")
        .def(py::init<>())
        .def_readwrite("total_beats", &transform::MappingConfig::total_beats)
        .def_readwrite("pitch_lo", &transform::MappingConfig::pitch_lo)
        .def_readwrite("pitch_hi", &transform::MappingConfig::pitch_hi)
        .def_readwrite("enable_progression", &transform::MappingConfig::enable_progression)
        .def_readwrite("enable_interval", &transform::MappingConfig::enable_interval)
        .def_readwrite("enable_dynamics", &transform::MappingConfig::enable_dynamics)
        .def_readwrite("enable_pauses", &transform::MappingConfig::enable_pauses)
        .def_readwrite("notes_per_unit_scale", &transform::MappingConfig::notes_per_unit_scale)
        .def_readwrite("scale_snap", &transform::MappingConfig::scale_snap)
        .def_readwrite("interval_max", &transform::MappingConfig::interval_max);

    py::class_<score::MidiDocument>(m, "MidiDocument")
        .def(py::init<>())
        .def_readwrite("ppq", &score::MidiDocument::ppq)
        .def_readwrite("instrument_program", &score::MidiDocument::instrument_program)
        .def_readwrite("tempo_us_per_quarter", &score::MidiDocument::tempo_us_per_quarter);

    // kets
    m.def("ket_inner_product", &kets::ket_inner_product, py::arg("a"), py::arg("b"));
    m.def("distance", &kets::distance, py::arg("a"), py::arg("b"),
          "Cosine similarity of two visual decompositions (1 = identical).");
    m.def("render", &kets::render, py::arg("decomposition"), py::arg("width"), py::arg("height"));
    m.def("time_reverse", &kets::time_reverse, py::arg("decomposition"));

    // filter
    m.def("load_image", &filter::load_image, py::arg("path"));
    m.def("binarize", &filter::binarize, py::arg("image"));
    m.def(
        "decompose",
        [](const filter::ImageRaster& img, int level) {
            return filter::decompose(img, {level});
        },
        py::arg("image"), py::arg("level") = 2);
    m.def("minimal_ket_count", &filter::minimal_ket_count, py::arg("image"),
          py::arg("recog_threshold") = 0.5);

    // transform
    m.def("expand_term", &transform::expand_term, py::arg("placement"), py::arg("ket"),
          py::arg("config"));
    m.def("transform", &transform::apply, py::arg("decomposition"), py::arg("config"));
    m.def("transform_sequence", &transform::apply_sequence, py::arg("snapshots"),
          py::arg("config"));
    m.def("retrograde", &transform::retrograde, py::arg("sound"));
    m.def("sound_distance", &transform::sound_distance, py::arg("a"), py::arg("b"));

    // score
    m.def("transpose_to_range", &score::transpose_to_range, py::arg("pitch"), py::arg("lo"),
          py::arg("hi"));
    m.def(
        "to_midi",
        [](const transform::SoundDecomposition& s, const score::MidiDocument& doc) {
            const auto bytes = score::to_midi(s, doc);
            return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        },
        py::arg("sound"), py::arg("doc") = score::MidiDocument{});
    m.def("to_svg", &score::to_svg, py::arg("decomposition"), py::arg("width"), py::arg("height"));
    m.def("serialize_decomposition", py::overload_cast<const kets::VisualDecomposition&, int, int>(&score::serialize),
          py::arg("decomposition"), py::arg("width_hint"), py::arg("height_hint"));
    m.def("serialize_sound", py::overload_cast<const transform::SoundDecomposition&>(&score::serialize),
          py::arg("sound"));
    m.def(
        "deserialize_decomposition",
        [](const std::string& text) { return score::deserialize_decomposition(text).decomposition; },
        py::arg("text"));
    m.def("deserialize_sound", &score::deserialize_sound, py::arg("text"));
}
