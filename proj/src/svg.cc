/* Copyright 2026 The detdiag Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "detdiag/svg.h"

#include <cmath>
#include <cstdio>

namespace detdiag {

std::string XmlEscape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string Coord(double v) {
  if (std::fabs(v) < 0.005) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

SvgWriter::SvgWriter(double width, double height) {
  out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" "
          "xmlns:xlink=\"http://www.w3.org/1999/xlink\" width=\""
       << Coord(width) << "\" height=\"" << Coord(height) << "\" viewBox=\"0 0 "
       << Coord(width) << ' ' << Coord(height)
       << "\" font-family=\"sans-serif\">\n";
}

void SvgWriter::BeginGroup(double dx, double dy, std::string_view attrs) {
  out_ << "<g transform=\"translate(" << Coord(dx) << ',' << Coord(dy) << ")\"";
  if (!attrs.empty()) out_ << ' ' << attrs;
  out_ << ">\n";
}

void SvgWriter::EndGroup() { out_ << "</g>\n"; }

void SvgWriter::Rect(double x, double y, double w, double h,
                     std::string_view attrs) {
  out_ << "<rect x=\"" << Coord(x) << "\" y=\"" << Coord(y) << "\" width=\""
       << Coord(w) << "\" height=\"" << Coord(h) << "\" " << attrs << "/>\n";
}

void SvgWriter::Line(double x1, double y1, double x2, double y2,
                     std::string_view attrs) {
  out_ << "<line x1=\"" << Coord(x1) << "\" y1=\"" << Coord(y1) << "\" x2=\""
       << Coord(x2) << "\" y2=\"" << Coord(y2) << "\" " << attrs << "/>\n";
}

void SvgWriter::Circle(double cx, double cy, double r, std::string_view attrs) {
  out_ << "<circle cx=\"" << Coord(cx) << "\" cy=\"" << Coord(cy) << "\" r=\""
       << Coord(r) << "\" " << attrs << "/>\n";
}

void SvgWriter::Polygon(std::span<const std::pair<double, double>> points,
                        std::string_view attrs) {
  out_ << "<polygon points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) out_ << ' ';
    out_ << Coord(points[i].first) << ',' << Coord(points[i].second);
  }
  out_ << "\" " << attrs << "/>\n";
}

void SvgWriter::Text(double x, double y, std::string_view text,
                     std::string_view attrs) {
  out_ << "<text x=\"" << Coord(x) << "\" y=\"" << Coord(y) << "\"";
  if (!attrs.empty()) out_ << ' ' << attrs;
  out_ << '>' << XmlEscape(text) << "</text>\n";
}

void SvgWriter::Image(std::string_view href, double x, double y, double w,
                      double h) {
  const std::string escaped = XmlEscape(href);
  out_ << "<image href=\"" << escaped << "\" xlink:href=\"" << escaped
       << "\" x=\"" << Coord(x) << "\" y=\"" << Coord(y) << "\" width=\""
       << Coord(w) << "\" height=\"" << Coord(h)
       << "\" preserveAspectRatio=\"none\"/>\n";
}

void SvgWriter::Metadata(std::string_view id, std::string_view payload) {
  out_ << "<metadata id=\"" << XmlEscape(id) << "\">" << XmlEscape(payload)
       << "</metadata>\n";
}

std::string SvgWriter::Finish() {
  out_ << "</svg>\n";
  return out_.str();
}

}  // namespace detdiag
