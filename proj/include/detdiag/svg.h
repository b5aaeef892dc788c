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

#ifndef DETDIAG_SVG_H_
#define DETDIAG_SVG_H_

#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

namespace detdiag {

// Minimal streaming SVG builder. Attribute strings are inserted verbatim;
// text content and hrefs are escaped.
class SvgWriter {
 public:
  SvgWriter(double width, double height);

  void BeginGroup(double dx, double dy, std::string_view attrs = {});
  void EndGroup();

  void Rect(double x, double y, double w, double h, std::string_view attrs);
  void Line(double x1, double y1, double x2, double y2, std::string_view attrs);
  void Circle(double cx, double cy, double r, std::string_view attrs);
  void Polygon(std::span<const std::pair<double, double>> points,
               std::string_view attrs);
  void Text(double x, double y, std::string_view text, std::string_view attrs);
  void Image(std::string_view href, double x, double y, double w, double h);
  // Embeds a machine-readable payload (typically JSON) in <metadata>.
  void Metadata(std::string_view id, std::string_view payload);

  // Closes the document and returns it.
  std::string Finish();

 private:
  std::ostringstream out_;
};

std::string XmlEscape(std::string_view text);
// Fixed two-decimal coordinate with trailing zeros trimmed.
std::string Coord(double v);

}  // namespace detdiag

#endif  // DETDIAG_SVG_H_
