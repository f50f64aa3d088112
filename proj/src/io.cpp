#include "rsplit/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace rsplit {

namespace {

void put_u32(std::ostream& out, uint32_t v) {
    const unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                                    static_cast<unsigned char>((v >> 8) & 0xff),
                                    static_cast<unsigned char>((v >> 16) & 0xff),
                                    static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

uint32_t get_u32(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in) throw ParseError("unexpected end of file in header");
    return static_cast<uint32_t>(bytes[0]) | (static_cast<uint32_t>(bytes[1]) << 8) |
           (static_cast<uint32_t>(bytes[2]) << 16) | (static_cast<uint32_t>(bytes[3]) << 24);
}

void put_f64(std::ostream& out, double v) {
    const uint64_t bits = std::bit_cast<uint64_t>(v);
    unsigned char bytes[8];
    for (int k = 0; k < 8; ++k) bytes[k] = static_cast<unsigned char>((bits >> (8 * k)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_f64(std::istream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    if (!in) throw ParseError("unexpected end of file in payload");
    uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<uint64_t>(bytes[k]) << (8 * k);
    return std::bit_cast<double>(bits);
}

void put_f64_block(std::ostream& out, const double* values, size_t count) {
    for (size_t k = 0; k < count; ++k) put_f64(out, values[k]);
}

void get_f64_block(std::istream& in, double* values, size_t count) {
    for (size_t k = 0; k < count; ++k) values[k] = get_f64(in);
}

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path, bool binary) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

void expect_magic(std::istream& in, const char* magic, const std::string& path) {
    char buf[4];
    in.read(buf, 4);
    if (!in || std::memcmp(buf, magic, 4) != 0)
        throw ParseError(path + ": bad magic, expected " + magic);
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_csv_row(const std::string& line, int row_number) {
    std::vector<double> values;
    size_t pos = 0;
    while (pos <= line.size()) {
        size_t comma = line.find(',', pos);
        if (comma == std::string::npos) comma = line.size();
        const std::string field = line.substr(pos, comma - pos);
        try {
            size_t used = 0;
            values.push_back(std::stod(field, &used));
            while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used])))
                ++used;
            if (used != field.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError("row " + std::to_string(row_number) + ": bad field '" + field + "'");
        }
        pos = comma + 1;
        if (comma == line.size()) break;
    }
    return values;
}

void write_csv_rows(std::ostream& out, const double* values, int rows, int cols) {
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (j) out << ',';
            out << format_value(values[static_cast<size_t>(i) * cols + j]);
        }
        out << '\n';
    }
}

}  // namespace

GridFormat grid_format_from_name(const std::string& name) {
    if (name == "csv") return GridFormat::csv;
    if (name == "rsg-binary" || name == "rsg") return GridFormat::rsg_binary;
    if (name == "pgm" || name == "pgm-out") return GridFormat::pgm;
    throw std::invalid_argument("unknown grid format: " + name);
}

GridFormat guess_grid_format(const std::string& path) {
    const size_t dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "csv") return GridFormat::csv;
    if (ext == "pgm") return GridFormat::pgm;
    return GridFormat::rsg_binary;
}

Grid2D load_grid(const std::string& path, GridFormat format) {
    if (format == GridFormat::pgm) throw std::invalid_argument("pgm is a write-only format");
    if (format == GridFormat::rsg_binary) {
        std::ifstream in = open_in(path, true);
        expect_magic(in, "RSG1", path);
        const int n = static_cast<int>(get_u32(in));
        const double half_width = get_f64(in);
        if (!is_power_of_two(n)) throw ParseError(path + ": n must be a power of two");
        if (!(half_width > 0.0)) throw ParseError(path + ": half_width must be positive");
        std::vector<double> values(static_cast<size_t>(n) * n);
        get_f64_block(in, values.data(), values.size());
        return Grid2D(n, half_width, std::move(values));
    }
    // csv
    std::ifstream in = open_in(path, false);
    std::string line;
    int declared_n = -1;
    double half_width = 4.0;
    std::vector<std::vector<double>> rows;
    int row_number = 0;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string token;
            while (hs >> token) {
                if (token.rfind("n=", 0) == 0) declared_n = std::stoi(token.substr(2));
                if (token.rfind("L=", 0) == 0) half_width = std::stod(token.substr(2));
            }
            continue;
        }
        rows.push_back(parse_csv_row(line, row_number));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");
    const int n = static_cast<int>(rows.size());
    if (declared_n >= 0 && declared_n != n)
        throw ParseError(path + ": header declares n=" + std::to_string(declared_n) + " but found " +
                         std::to_string(n) + " rows");
    std::vector<double> values;
    values.reserve(static_cast<size_t>(n) * n);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw ParseError(path + ": row " + std::to_string(i + 1) + " has " +
                             std::to_string(rows[i].size()) + " fields, expected " +
                             std::to_string(n));
        values.insert(values.end(), rows[i].begin(), rows[i].end());
    }
    if (!is_power_of_two(n)) throw ParseError(path + ": n must be a power of two");
    return Grid2D(n, half_width, std::move(values));
}

Grid2D load_grid(const std::string& path) { return load_grid(path, guess_grid_format(path)); }

void save_grid(const Grid2D& g, const std::string& path, GridFormat format) {
    if (format == GridFormat::rsg_binary) {
        std::ofstream out = open_out(path, true);
        out.write("RSG1", 4);
        put_u32(out, static_cast<uint32_t>(g.n));
        put_f64(out, g.half_width);
        put_f64_block(out, g.data.data(), g.data.size());
        if (!out) throw IoError("short write: " + path);
        return;
    }
    if (format == GridFormat::csv) {
        std::ofstream out = open_out(path, false);
        out << "# n=" << g.n << " L=" << format_value(g.half_width) << '\n';
        write_csv_rows(out, g.data.data(), g.n, g.n);
        if (!out) throw IoError("short write: " + path);
        return;
    }
    // pgm: 16-bit grayscale, linear min-max scaling, MSB-first samples
    double lo = g.data.empty() ? 0.0 : g.data[0];
    double hi = lo;
    for (double v : g.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    std::ofstream out = open_out(path, true);
    out << "P5\n" << g.n << ' ' << g.n << "\n65535\n";
    for (double v : g.data) {
        const double scaled = (v - lo) / span * 65535.0;
        const auto pixel = static_cast<uint16_t>(std::clamp(scaled, 0.0, 65535.0) + 0.5);
        const unsigned char bytes[2] = {static_cast<unsigned char>(pixel >> 8),
                                        static_cast<unsigned char>(pixel & 0xff)};
        out.write(reinterpret_cast<const char*>(bytes), 2);
    }
    if (!out) throw IoError("short write: " + path);
}

void save_grid(const Grid2D& g, const std::string& path) {
    save_grid(g, path, guess_grid_format(path));
}

void save_sinogram(const Sinogram2D& sino, const std::string& path) {
    std::ofstream out = open_out(path, true);
    out.write("RSS1", 4);
    put_u32(out, static_cast<uint32_t>(sino.n));
    const int rows = 2 * sino.n - 1;
    for (Quad q : kQuads) {
        const Quadrant2D& quad = sino[q];
        for (int h = 0; h < rows; ++h)
            for (int s = 0; s < sino.n; ++s) put_f64(out, quad.at(h, s));
    }
    if (!out) throw IoError("short write: " + path);
}

Sinogram2D load_sinogram(const std::string& path) {
    std::ifstream in = open_in(path, true);
    expect_magic(in, "RSS1", path);
    const int n = static_cast<int>(get_u32(in));
    if (!is_power_of_two(n)) throw ParseError(path + ": n must be a power of two");
    Sinogram2D sino(n);
    const int rows = 2 * n - 1;
    for (Quad q : kQuads) {
        Quadrant2D& quad = sino[q];
        for (int h = 0; h < rows; ++h)
            for (int s = 0; s < n; ++s) quad.at(h, s) = get_f64(in);
    }
    return sino;
}

void save_sinogram_csv(const Sinogram2D& sino, const std::string& path) {
    std::ofstream out = open_out(path, false);
    out << "# n=" << sino.n << '\n';
    const int rows = 2 * sino.n - 1;
    for (Quad q : kQuads) {
        out << "# quadrant=" << quad_name(q) << '\n';
        const Quadrant2D& quad = sino[q];
        for (int h = 0; h < rows; ++h) {
            for (int s = 0; s < sino.n; ++s) {
                if (s) out << ',';
                out << format_value(quad.at(h, s));
            }
            out << '\n';
        }
    }
    if (!out) throw IoError("short write: " + path);
}

Sinogram2D load_sinogram_csv(const std::string& path) {
    std::ifstream in = open_in(path, false);
    std::string line;
    int n = -1;
    Sinogram2D sino;
    int quad_index = -1;
    int row_in_quad = 0;
    int row_number = 0;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string token;
            while (hs >> token) {
                if (token.rfind("n=", 0) == 0) {
                    n = std::stoi(token.substr(2));
                    sino = Sinogram2D(n);
                }
                if (token.rfind("quadrant=", 0) == 0) {
                    if (n < 0) throw ParseError(path + ": quadrant header before n header");
                    quad_index = static_cast<int>(quad_from_name(token.substr(9)[0]));
                    row_in_quad = 0;
                }
            }
            continue;
        }
        if (quad_index < 0) throw ParseError(path + ": data before quadrant header");
        const std::vector<double> values = parse_csv_row(line, row_number);
        if (static_cast<int>(values.size()) != n)
            throw ParseError(path + ": row " + std::to_string(row_number) + " has " +
                             std::to_string(values.size()) + " fields, expected " + std::to_string(n));
        if (row_in_quad >= 2 * n - 1)
            throw ParseError(path + ": too many rows in quadrant block at row " +
                             std::to_string(row_number));
        Quadrant2D& quad = sino.quadrants[quad_index];
        for (int s = 0; s < n; ++s) quad.at(row_in_quad, s) = values[s];
        ++row_in_quad;
    }
    if (n < 0) throw ParseError(path + ": missing n header");
    return sino;
}

Grid3D load_grid3(const std::string& path) {
    std::ifstream in = open_in(path, true);
    expect_magic(in, "RSG3", path);
    const int n = static_cast<int>(get_u32(in));
    const double half_width = get_f64(in);
    if (!is_power_of_two(n)) throw ParseError(path + ": n must be a power of two");
    std::vector<double> values(static_cast<size_t>(n) * n * n);
    get_f64_block(in, values.data(), values.size());
    return Grid3D(n, half_width, std::move(values));
}

void save_grid3(const Grid3D& g, const std::string& path) {
    std::ofstream out = open_out(path, true);
    out.write("RSG3", 4);
    put_u32(out, static_cast<uint32_t>(g.n));
    put_f64(out, g.half_width);
    put_f64_block(out, g.data.data(), g.data.size());
    if (!out) throw IoError("short write: " + path);
}

void save_sinogram3(const Sinogram3D& sino, const std::string& path) {
    std::ofstream out = open_out(path, true);
    out.write("RS31", 4);
    put_u32(out, static_cast<uint32_t>(sino.n));
    const int n = sino.n;
    for (const auto& hex : sino.hexadecants)
        for (int h = 0; h < 3 * n - 2; ++h)
            for (int s1 = 0; s1 < n; ++s1)
                for (int s2 = 0; s2 < n; ++s2) put_f64(out, hex.at(h, s1, s2));
    if (!out) throw IoError("short write: " + path);
}

Sinogram3D load_sinogram3(const std::string& path) {
    std::ifstream in = open_in(path, true);
    expect_magic(in, "RS31", path);
    const int n = static_cast<int>(get_u32(in));
    if (!is_power_of_two(n)) throw ParseError(path + ": n must be a power of two");
    Sinogram3D sino(n);
    for (auto& hex : sino.hexadecants)
        for (int h = 0; h < 3 * n - 2; ++h)
            for (int s1 = 0; s1 < n; ++s1)
                for (int s2 = 0; s2 < n; ++s2) hex.at(h, s1, s2) = get_f64(in);
    return sino;
}

}  // namespace rsplit
