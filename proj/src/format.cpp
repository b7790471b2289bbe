#include "uqseg/format.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace uqseg {

std::string format_real(double v) {
    std::array<char, 64> buf;
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 9);
    if (res.ec != std::errc())
        throw std::runtime_error("format_real: conversion failed");
    return std::string(buf.data(), res.ptr);
}

}  // namespace uqseg
