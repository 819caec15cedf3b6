#include "modelavg/random.hpp"

namespace modelavg {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t chain(std::uint64_t key, std::uint64_t index) noexcept {
    return mix64(key ^ mix64(index + 0x632be59bd9b4e019ULL));
}

} // namespace

RandomStream::RandomStream(std::uint64_t key) : key_(key), engine_(mix64(key)) {}

RandomStream RandomStream::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return RandomStream(mix64(seed)).split(path);
}

RandomStream RandomStream::split(std::uint64_t index) const {
    return RandomStream(chain(key_, index));
}

RandomStream RandomStream::split(std::initializer_list<std::uint64_t> path) const {
    std::uint64_t k = key_;
    for (auto p : path) k = chain(k, p);
    return RandomStream(k);
}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    double u = dist(engine_);
    while (u <= lo) u = dist(engine_);
    return u;
}

std::size_t RandomStream::index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
}

} // namespace modelavg
