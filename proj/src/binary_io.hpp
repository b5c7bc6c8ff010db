#pragma once

// Internal little-endian binary readers/writers shared by the dataset and
// checkpoint serializers.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "fusim/common.hpp"

namespace fusim::detail {

inline void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline void put_u64(std::vector<unsigned char>& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline void put_f32(std::vector<unsigned char>& buf, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(buf, bits);
}

inline void put_f64(std::vector<unsigned char>& buf, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(buf, bits);
}

class Reader {
  public:
    Reader(const unsigned char* data, std::size_t size, std::string source)
        : data_(data), size_(size), source_(std::move(source)) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }

    float f32() {
        const std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }

    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

    void bytes(unsigned char* out, std::size_t n) {
        need(n);
        std::memcpy(out, data_ + pos_, n);
        pos_ += n;
    }

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }
    const unsigned char* cursor() const { return data_ + pos_; }
    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }

  private:
    void need(std::size_t n) const {
        if (size_ - pos_ < n) {
            throw TruncatedError(source_ + ": file truncated (needed " + std::to_string(n) +
                                 " more bytes at offset " + std::to_string(pos_) + ")");
        }
    }

    const unsigned char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
    std::string source_;
};

inline std::vector<unsigned char> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<unsigned char> buf(static_cast<std::size_t>(size));
    if (size > 0) in.read(reinterpret_cast<char*>(buf.data()), size);
    if (!in) throw IoError("failed reading '" + path + "'");
    return buf;
}

inline void write_file_bytes(const std::string& path, const std::vector<unsigned char>& buf) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace fusim::detail
