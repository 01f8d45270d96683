#include "scc/common/digest.hpp"

#include <fstream>

#include <openssl/evp.h>

#include "scc/common/error.hpp"

namespace scc {

namespace {

class DigestContext {
public:
    DigestContext() : ctx_(EVP_MD_CTX_new()) {
        if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
            throw Error(ErrorKind::data, "sha256: digest initialisation failed");
        }
    }
    ~DigestContext() { EVP_MD_CTX_free(ctx_); }
    DigestContext(const DigestContext&) = delete;
    DigestContext& operator=(const DigestContext&) = delete;

    void update(const void* data, std::size_t size) { EVP_DigestUpdate(ctx_, data, size); }

    Sha256 finish() {
        Sha256 out{};
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_, out.data(), &len);
        return out;
    }

private:
    EVP_MD_CTX* ctx_;
};

}  // namespace

Sha256 sha256(std::string_view bytes) {
    DigestContext ctx;
    ctx.update(bytes.data(), bytes.size());
    return ctx.finish();
}

Sha256 sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    DigestContext ctx;
    char buffer[1 << 16];
    while (in) {
        in.read(buffer, sizeof buffer);
        ctx.update(buffer, static_cast<std::size_t>(in.gcount()));
    }
    return ctx.finish();
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

}  // namespace scc
