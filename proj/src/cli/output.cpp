#include "cli/output.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <system_error>

#include "triwalk/errors.hpp"

namespace triwalk::cli {

std::string format_real(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, kCsvDigits);
  if (result.ec != std::errc()) throw Error("format_real: conversion failed");
  return std::string(buffer, result.ptr);
}

void write_output(const std::string& content, const std::optional<std::filesystem::path>& path) {
  if (!path) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::filesystem::path temp = *path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + temp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(temp);
      throw Error("write to " + temp.string() + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, *path, ec);
  if (ec) {
    std::filesystem::remove(temp);
    throw Error("cannot move output into place at " + path->string() + ": " + ec.message());
  }
}

}  // namespace triwalk::cli
