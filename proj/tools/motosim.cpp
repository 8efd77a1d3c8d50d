// motosim - command-line front end for the anti-theft controller library.
//
// Subcommands:
//   enroll   --db <path> --label <name> --image <pgm>
//   identify --db <path> --image <pgm> [--threshold <t>]
//   run      --config <path> --db <path> --scenario <path> [--trace-out <path>]
//   lbp      --image <pgm> --out <pgm>
//
// Exit codes: 0 success, 1 usage error, 2 input-data error.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moto/controller.hpp"
#include "moto/error.hpp"
#include "moto/facerec.hpp"
#include "moto/imaging.hpp"
#include "moto/sim.hpp"
#include "moto/storage.hpp"
#include "moto/strings.hpp"

namespace {

std::vector<std::uint8_t> must_read(const std::string& path) {
    auto bytes = moto::sim::read_file(path);
    if (!bytes) throw moto::Error(moto::errc::truncated, "cannot read " + path);
    return *bytes;
}

void must_write(const std::string& path, std::span<const std::uint8_t> bytes) {
    if (!moto::sim::write_file(path, bytes))
        throw moto::Error(moto::errc::truncated, "cannot write " + path);
}

int cmd_enroll(const std::string& db_path, const std::string& label,
               const std::string& image_path) {
    if (label.find_first_of(" \t") != std::string::npos)
        throw moto::Error(moto::errc::empty_label, "label must not contain whitespace");

    moto::facerec::FaceDb db;
    if (auto existing = moto::sim::read_file(db_path))
        db = moto::storage::load_facedb(*existing);

    moto::imaging::GrayImage img = moto::imaging::load_pgm(must_read(image_path));
    db = moto::facerec::enroll(db, label, img);
    must_write(db_path, moto::storage::save_facedb(db));
    std::printf("enrolled %s (%zu templates)\n", label.c_str(), db.templates.size());
    return 0;
}

int cmd_identify(const std::string& db_path, const std::string& image_path,
                 double threshold) {
    moto::facerec::FaceDb db = moto::storage::load_facedb(must_read(db_path));
    moto::imaging::GrayImage img = moto::imaging::load_pgm(must_read(image_path));
    moto::facerec::MatchResult result = moto::facerec::identify(db, img, threshold);
    if (result.matched)
        std::printf("MATCH %s %s\n", result.label.c_str(),
                    moto::format_fixed(*result.distance, 6).c_str());
    else if (result.distance)
        std::printf("NOMATCH %s\n", moto::format_fixed(*result.distance, 6).c_str());
    else
        std::printf("NOMATCH -\n");
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& db_path,
            const std::string& scenario_path, const std::string& trace_out) {
    auto config = moto::storage::load_config(must_read(config_path));
    auto db = moto::storage::load_facedb(must_read(db_path));

    auto scn_bytes = must_read(scenario_path);
    auto events = moto::sim::parse_scenario(
        std::string_view(reinterpret_cast<const char*>(scn_bytes.data()), scn_bytes.size()));

    std::string trace = moto::sim::render_trace(moto::sim::run_scenario(events, config, db));
    std::fputs(trace.c_str(), stdout);
    if (!trace_out.empty())
        must_write(trace_out, std::span(reinterpret_cast<const std::uint8_t*>(trace.data()),
                                        trace.size()));
    return 0;
}

int cmd_lbp(const std::string& image_path, const std::string& out_path) {
    moto::imaging::GrayImage img = moto::imaging::load_pgm(must_read(image_path));
    moto::facerec::LbpImage lbp = moto::facerec::lbp_map(img);
    moto::imaging::GrayImage out{lbp.width, lbp.height, lbp.codes};
    must_write(out_path, moto::imaging::save_pgm(out));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"motosim - vehicle anti-theft controller simulator"};
    app.require_subcommand(1);

    std::string db_path, label, image_path, config_path, scenario_path, trace_out, out_path;
    double threshold = 1.0;

    auto* enroll = app.add_subcommand("enroll", "Add a face to the database");
    enroll->add_option("--db", db_path, "face database file (created if missing)")->required();
    enroll->add_option("--label", label, "identity label")->required();
    enroll->add_option("--image", image_path, "PGM face image")->required();

    auto* identify = app.add_subcommand("identify", "Match an image against the database");
    identify->add_option("--db", db_path, "face database file")->required();
    identify->add_option("--image", image_path, "PGM probe image")->required();
    identify->add_option("--threshold", threshold, "match threshold (default 1.0)");

    auto* run = app.add_subcommand("run", "Replay a scenario against the controller");
    run->add_option("--config", config_path, "controller config file")->required();
    run->add_option("--db", db_path, "face database file")->required();
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--trace-out", trace_out, "also write the trace to this file");

    auto* lbp = app.add_subcommand("lbp", "Write the LBP map of an image as a PGM");
    lbp->add_option("--image", image_path, "PGM input image")->required();
    lbp->add_option("--out", out_path, "PGM output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (enroll->parsed()) return cmd_enroll(db_path, label, image_path);
        if (identify->parsed()) return cmd_identify(db_path, image_path, threshold);
        if (run->parsed()) return cmd_run(config_path, db_path, scenario_path, trace_out);
        if (lbp->parsed()) return cmd_lbp(image_path, out_path);
    } catch (const moto::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
