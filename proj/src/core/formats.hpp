#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/geometry.hpp"
#include "core/pseudo_label.hpp"
#include "core/types.hpp"

namespace ott {

// Detection text format: one record per line,
//   frame,x1,y1,x2,y2,confidence,class_id
// '.' decimal separator, '#' comment lines, frames nondecreasing.
std::vector<Detection> read_detections(const std::string& path);
void write_detections(const std::string& path, const std::vector<Detection>& dets);

// Embedding binary format, little-endian:
//   magic "S3EM", u16 version=1, u32 count, u32 dim, count*dim f32 row-major.
// Row order equals detection record order.
std::vector<Embedding> read_embeddings(const std::string& path);
void write_embeddings(const std::string& path, const std::vector<Embedding>& embs);

// Grid binary format, little-endian:
//   magic "S3GR", u16 version=1, u32 width, u32 height, u32 channels in {1,2},
//   f32 row-major, channels interleaved per pixel.
MotionField read_grid(const std::string& path);
void write_grid(const std::string& path, const MotionField& grid);

// Track text format: frame,track_id,x1,y1,x2,y2.
TrackOutput read_tracks(const std::string& path);
void write_tracks(const std::string& path, const TrackOutput& tracks);

// Pseudo-label text format: ref_idx,tgt_idx per line.
std::vector<std::pair<std::size_t, std::size_t>> read_labels(const std::string& path);
void write_labels(const std::string& path,
                  const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

// Flat key=value report.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries);

// Occlusion masks travel as 0/1-valued single-channel grids.
MotionField mask_to_grid(const OcclusionMask& mask);
OcclusionMask grid_to_mask(const MotionField& grid);

/// Shortest text form of a double that parses back to the same bits.
std::string format_number(double v);

}  // namespace ott
