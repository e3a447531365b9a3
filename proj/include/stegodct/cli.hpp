#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stegodct/codec.hpp"
#include "stegodct/errors.hpp"
#include "stegodct/image.hpp"
#include "stegodct/keyschedule.hpp"
#include "stegodct/metrics.hpp"

namespace stegodct::cli {

// Exit codes: 0 success, 2 usage/params, 3 capacity, 4 format or I/O,
// 5 extraction integrity.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::params: return 2;
        case ErrorKind::capacity: return 3;
        case ErrorKind::format: return 4;
        case ErrorKind::io: return 4;
        case ErrorKind::extract: return 5;
    }
    return 1;
}

namespace detail {

// Secrets arrive as strings and are parsed here with value-free diagnostics,
// so no secret can leak through an error message.
inline double parse_secret_double(const std::string& text, const char* flag) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        raise(ErrorKind::params, std::string(flag) + " is not a valid decimal number");
    }
    return v;
}

struct SecretArgs {
    std::string key_hex;
    std::string x0;
    std::string nu;
    std::string gain = "3.9";
};

inline void add_secret_options(CLI::App* cmd, SecretArgs& s) {
    cmd->add_option("--key", s.key_hex, "128-bit key as 32 hex characters")
        ->envname("STEGO_KEY")
        ->required();
    cmd->add_option("--x0", s.x0, "chaotic map initial condition, in (0,1)")
        ->envname("STEGO_X0")
        ->required();
    cmd->add_option("--nu", s.nu, "fractional order, in (0,1]")
        ->envname("STEGO_NU")
        ->required();
    cmd->add_option("--gain", s.gain, "map nonlinearity gain, in (0,4] (default 3.9)")
        ->envname("STEGO_GAIN");
}

inline EmbedConfig make_config(const SecretArgs& s, double mu, const std::string& mode) {
    EmbedConfig cfg;
    cfg.key = parse_hex_key(s.key_hex);
    cfg.map.x0 = parse_secret_double(s.x0, "--x0");
    cfg.map.nu = parse_secret_double(s.nu, "--nu");
    cfg.map.gain = parse_secret_double(s.gain, "--gain");
    validate_map_params(cfg.map);
    if (!(mu > 50.0 && mu < 100.0)) {
        raise(ErrorKind::params, "--mu must lie strictly between 50 and 100");
    }
    cfg.mu = mu;
    if (mode == "pixel") {
        cfg.mode = StegoMode::pixel;
    } else if (mode == "coefficient") {
        cfg.mode = StegoMode::coefficient;
    } else {
        raise(ErrorKind::params, "--mode must be 'pixel' or 'coefficient'");
    }
    return cfg;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::io, "cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) raise(ErrorKind::io, "read failure on " + path);
    return bytes;
}

inline void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorKind::io, "cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    out.flush();
    if (!out) raise(ErrorKind::io, "write failure on " + path);
}

inline std::string fmt(double v) { return stegodct::detail::format_double(v); }

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::vector<std::uint8_t> pseudorandom_bits(std::uint64_t seed, std::size_t count) {
    std::vector<std::uint8_t> bits(count);
    std::uint64_t state = seed;
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0) word = splitmix64(state);
        bits[i] = (word >> (63 - i % 64)) & 1;
    }
    return bits;
}

inline nlohmann::json metrics_json(const MetricsReport& m) {
    nlohmann::json j;
    j["psnr_db"] = std::isinf(m.psnr_db) ? nlohmann::json("inf") : nlohmann::json(m.psnr_db);
    j["mse"] = m.mse;
    j["xi"] = m.xi;
    j["uiqi"] = m.uiqi;
    j["image_fidelity"] = m.image_fidelity;
    j["relative_entropy"] = m.relative_entropy;
    return j;
}

struct BenchRow {
    std::string name;
    int width = 0, height = 0, channels = 0;
    std::size_t capacity = 0, payload = 0;
    double ber = 0.0;
    MetricsReport metrics;
};

}  // namespace detail

inline int cmd_embed(const std::string& cover_path, const std::string& message_path,
                     const std::string& out_path, const EmbedConfig& cfg) {
    const Image cover = load_image(cover_path);
    const std::vector<std::uint8_t> message = detail::read_file_bytes(message_path);
    const std::vector<std::uint8_t> payload = bytes_to_bits(message);

    std::cout << "capacity: " << capacity_bits(cover) << " bits\n";
    const QuantizedImage q = embed_to_coefficients(cover, payload, cfg);
    std::cout << "payload: " << payload.size() << " bits\n";

    if (cfg.mode == StegoMode::coefficient) {
        write_coefficient_record(q, out_path);
    } else {
        const Image stego = reconstruct_image(q);
        save_image(stego, out_path);
        const PsnrResult p = psnr(cover, stego);
        std::cout << "psnr_db: " << detail::fmt(p.psnr_db) << "\n";
    }
    std::cout << "stego written to " << out_path << "\n";
    return 0;
}

inline int cmd_extract(const std::string& stego_path, const std::string& out_path,
                       const EmbedConfig& cfg) {
    std::vector<std::uint8_t> bits;
    if (cfg.mode == StegoMode::coefficient) {
        bits = extract_payload(read_coefficient_record(stego_path), cfg);
    } else {
        bits = extract_payload(load_image(stego_path), cfg);
    }
    const std::vector<std::uint8_t> bytes = bits_to_bytes(bits);
    detail::write_file_bytes(out_path, bytes);
    std::cout << "recovered " << bits.size() << " bits -> " << out_path << "\n";
    return 0;
}

inline int cmd_metrics(const std::string& cover_path, const std::string& stego_path,
                       bool as_json, const std::string& out_path) {
    const Image cover = load_image(cover_path);
    const Image stego = load_image(stego_path);
    const MetricsReport m = compute_metrics(cover, stego);

    std::string text;
    if (as_json) {
        text = detail::metrics_json(m).dump() + "\n";
    } else {
        text = "psnr_db: " + detail::fmt(m.psnr_db) + "\nmse: " + detail::fmt(m.mse) +
               "\nxi: " + detail::fmt(m.xi) + "\nuiqi: " + detail::fmt(m.uiqi) +
               "\nimage_fidelity: " + detail::fmt(m.image_fidelity) +
               "\nrelative_entropy: " + detail::fmt(m.relative_entropy) + "\n";
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        detail::write_file_bytes(out_path,
                                 std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                           text.size()));
    }
    return 0;
}

inline int cmd_bench(const std::string& dataset_dir, const std::string& out_csv,
                     std::optional<std::size_t> payload_bits, std::uint64_t seed,
                     const EmbedConfig& cfg) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dataset_dir)) {
        raise(ErrorKind::io, dataset_dir + " is not a directory");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dataset_dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::cout << "seed: " << seed << "\n";
    std::vector<detail::BenchRow> rows;
    for (const fs::path& path : files) {
        try {
            const Image cover = load_image(path.string());
            const std::size_t cap = capacity_bits(cover);
            if (cap < 32) raise(ErrorKind::capacity, "no room for the length header");
            const std::size_t plen = payload_bits ? *payload_bits : cap - 32;
            const std::vector<std::uint8_t> payload = detail::pseudorandom_bits(seed, plen);

            const QuantizedImage q = embed_to_coefficients(cover, payload, cfg);
            const Image stego = reconstruct_image(q);

            detail::BenchRow row;
            row.name = path.filename().string();
            row.width = cover.width;
            row.height = cover.height;
            row.channels = cover.channels;
            row.capacity = cap;
            row.payload = plen;
            row.metrics = compute_metrics(cover, stego);

            // Measured bit error rate between embedded and extracted payload.
            // The pixel path re-quantizes the reconstructed image, so errors
            // are possible there; the coefficient record is exact by design.
            const QuantizedImage& readback =
                cfg.mode == StegoMode::pixel ? quantize_image(stego, cfg.mu) : q;
            const std::vector<std::uint8_t> got =
                stegodct::detail::read_schedule_bits(readback, cfg, 32 + plen);
            std::size_t errors = 0;
            for (std::size_t i = 0; i < plen; ++i) {
                if (got[32 + i] != payload[i]) ++errors;
            }
            row.ber = plen == 0 ? 0.0 : double(errors) / double(plen);
            rows.push_back(std::move(row));
        } catch (const Error& e) {
            std::cerr << "skip " << path.filename().string() << ": " << e.what() << "\n";
        }
    }
    if (rows.empty()) {
        raise(ErrorKind::format, "no conforming images in " + dataset_dir);
    }

    std::string csv;
    csv += "# stegodct bench csv v1\n";
    csv += "# config: mu=" + detail::fmt(cfg.mu) +
           " mode=" + (cfg.mode == StegoMode::pixel ? std::string("pixel") : "coefficient") +
           " payload_bits=" + (payload_bits ? std::to_string(*payload_bits) : "max") +
           " seed=" + std::to_string(seed) + "\n";
    csv += "image,width,height,channels,capacity_bits,payload_bits,ber,psnr_db,mse,xi,uiqi,"
           "image_fidelity,relative_entropy\n";
    std::vector<double> psnr_v, mse_v, uiqi_v, if_v, re_v, ber_v;
    for (const auto& r : rows) {
        csv += r.name + "," + std::to_string(r.width) + "," + std::to_string(r.height) + "," +
               std::to_string(r.channels) + "," + std::to_string(r.capacity) + "," +
               std::to_string(r.payload) + "," + detail::fmt(r.ber) + "," +
               detail::fmt(r.metrics.psnr_db) + "," + detail::fmt(r.metrics.mse) + "," +
               detail::fmt(r.metrics.xi) + "," + detail::fmt(r.metrics.uiqi) + "," +
               detail::fmt(r.metrics.image_fidelity) + "," +
               detail::fmt(r.metrics.relative_entropy) + "\n";
        psnr_v.push_back(r.metrics.psnr_db);
        mse_v.push_back(r.metrics.mse);
        uiqi_v.push_back(r.metrics.uiqi);
        if_v.push_back(r.metrics.image_fidelity);
        re_v.push_back(r.metrics.relative_entropy);
        ber_v.push_back(r.ber);
    }
    csv += "# boxplot,metric,q1,median,q3,iqr,lower_fence,upper_fence,outlier_count\n";
    auto boxplot_row = [&](const char* name, std::span<const double> v) {
        const BoxplotSummary s = boxplot_summary(v);
        csv += std::string("boxplot,") + name + "," + detail::fmt(s.q1) + "," +
               detail::fmt(s.median) + "," + detail::fmt(s.q3) + "," + detail::fmt(s.iqr) + "," +
               detail::fmt(s.lower_fence) + "," + detail::fmt(s.upper_fence) + "," +
               std::to_string(s.outliers.size()) + "\n";
    };
    boxplot_row("psnr_db", psnr_v);
    boxplot_row("mse", mse_v);
    boxplot_row("uiqi", uiqi_v);
    boxplot_row("image_fidelity", if_v);
    boxplot_row("relative_entropy", re_v);
    boxplot_row("ber", ber_v);

    detail::write_file_bytes(out_csv, std::span(reinterpret_cast<const std::uint8_t*>(csv.data()),
                                                csv.size()));
    std::cout << "processed " << rows.size() << " image(s) -> " << out_csv << "\n";
    return 0;
}

inline int run(int argc, const char* const* argv) {
    CLI::App app{"DCT-domain image steganography with chaotic position schedules"};
    app.require_subcommand(1);

    detail::SecretArgs embed_secrets, extract_secrets, bench_secrets;
    std::string cover, stego, message, out, mode = "pixel", dataset;
    double mu = 75.0;
    bool as_json = false;
    std::optional<std::size_t> payload_bits;
    std::uint64_t seed = 42;

    CLI::App* c_embed = app.add_subcommand("embed", "Embed a message file into a cover image");
    c_embed->add_option("--cover", cover, "cover BMP")->required();
    c_embed->add_option("--message", message, "message file (embedded as raw bits)")->required();
    c_embed->add_option("--out", out, "output stego artifact")->required();
    c_embed->add_option("--mu", mu, "quality factor, 50 < mu < 100");
    c_embed->add_option("--mode", mode, "stego artifact kind: pixel | coefficient");
    detail::add_secret_options(c_embed, embed_secrets);

    CLI::App* c_extract = app.add_subcommand("extract", "Extract a message from a stego artifact");
    c_extract->add_option("--stego", stego, "stego artifact (BMP or coefficient record)")
        ->required();
    c_extract->add_option("--out", out, "output message file")->required();
    c_extract->add_option("--mu", mu, "quality factor, 50 < mu < 100");
    c_extract->add_option("--mode", mode, "stego artifact kind: pixel | coefficient");
    detail::add_secret_options(c_extract, extract_secrets);

    CLI::App* c_metrics = app.add_subcommand("metrics", "Quality/security metrics of a pair");
    c_metrics->add_option("--cover", cover, "cover BMP")->required();
    c_metrics->add_option("--stego", stego, "stego BMP")->required();
    c_metrics->add_flag("--json", as_json, "emit a JSON object");
    c_metrics->add_option("--out", out, "write the report to a file instead of stdout");

    CLI::App* c_bench = app.add_subcommand("bench", "Embed into every image of a dataset and "
                                                    "emit per-image metrics plus box-plot rows");
    c_bench->add_option("--dataset", dataset, "directory of cover images")->required();
    c_bench->add_option("--out", out, "output CSV path")->required();
    c_bench->add_option("--mu", mu, "quality factor, 50 < mu < 100");
    c_bench->add_option("--mode", mode, "stego artifact kind: pixel | coefficient");
    c_bench->add_option("--payload-bits", payload_bits,
                        "payload size in bits (default: per-image maximum)");
    c_bench->add_option("--seed", seed, "seed of the pseudorandom payload");
    detail::add_secret_options(c_bench, bench_secrets);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // --help exits 0; any parse problem is a usage error
    }

    try {
        if (c_embed->parsed()) {
            return cmd_embed(cover, message, out, detail::make_config(embed_secrets, mu, mode));
        }
        if (c_extract->parsed()) {
            return cmd_extract(stego, out, detail::make_config(extract_secrets, mu, mode));
        }
        if (c_metrics->parsed()) {
            return cmd_metrics(cover, stego, as_json, out);
        }
        if (c_bench->parsed()) {
            return cmd_bench(dataset, out, payload_bits, seed,
                             detail::make_config(bench_secrets, mu, mode));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace stegodct::cli
