#include "gwpt/archive.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gwpt/serialize.hpp"

namespace gwpt::archive {

namespace {

constexpr char kMagic[4] = {'G', 'W', 'P', 'T'};

enum SectionId : std::uint32_t {
  kTagset = 1,
  kProfile = 2,
  kPipeline = 3,
  kDft = 4,
  kModel = 5,
  kConfig = 6,
};

void write_section(std::ostream& out, std::uint32_t id, const std::string& payload) {
  serialize::Writer w(out);
  w.u32(id);
  w.u64(payload.size());
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

std::string read_section(std::istream& in, std::uint32_t expected_id) {
  serialize::Reader r(in);
  const std::uint32_t id = r.u32();
  if (id != expected_id) {
    throw Error::bad_input("archive: expected section " + std::to_string(expected_id) +
                           ", found " + std::to_string(id));
  }
  const std::uint64_t len = r.u64();
  if (len > (1ull << 40)) throw Error::bad_input("archive: corrupt section length");
  std::string payload(len, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(len));
  if (static_cast<std::uint64_t>(in.gcount()) != len) {
    throw Error::bad_input("archive: truncated section " + std::to_string(expected_id));
  }
  return payload;
}

void write_pca(serialize::Writer& w, const feature_pipeline::PcaModel& pca) {
  w.f64_vec(pca.mean);
  w.u64(pca.components.rows);
  w.u64(pca.components.cols);
  for (double x : pca.components.data) w.f64(x);
  w.f64(pca.energy_kept);
}

feature_pipeline::PcaModel read_pca(serialize::Reader& r) {
  feature_pipeline::PcaModel pca;
  pca.mean = r.f64_vec();
  const std::uint64_t rows = r.u64();
  const std::uint64_t cols = r.u64();
  pca.components = Matrix(rows, cols);
  for (double& x : pca.components.data) x = r.f64();
  pca.energy_kept = r.f64();
  return pca;
}

}  // namespace

void ModelArchive::save_stream(std::ostream& out) const {
  out.write(kMagic, 4);
  serialize::Writer header(out);
  header.u32(kVersion);

  {
    std::ostringstream buf;
    serialize::Writer w(buf);
    w.u64(tagset.symbols().size());
    for (const std::string& s : tagset.symbols()) w.str(s);
    write_section(out, kTagset, buf.str());
  }
  {
    std::ostringstream buf;
    serialize::Writer w(buf);
    w.f64_vec(profile.avg_nsc);
    w.u32_vec(profile.sorted_order);
    write_section(out, kProfile, buf.str());
  }
  {
    std::ostringstream buf;
    serialize::Writer w(buf);
    w.u32_vec(pipeline.partition.low);
    w.u32_vec(pipeline.partition.mid);
    w.u32_vec(pipeline.partition.high);
    w.u32(pipeline.partition.cut_low);
    w.u32(pipeline.partition.cut_high);
    w.u64(pipeline.config.mid_orders.size());
    for (int n : pipeline.config.mid_orders) w.i32(n);
    w.u64(pipeline.config.high_orders.size());
    for (int n : pipeline.config.high_orders) w.i32(n);
    w.u8(pipeline.config.pca_on_unigrams ? 1 : 0);
    w.f64(pipeline.config.energy_threshold);
    w.u64(pipeline.config.max_pca_samples);
    w.u64(pipeline.embedding_dim);
    w.u64(pipeline.output_dim);
    w.u64(pipeline.blocks.size());
    for (const feature_pipeline::Block& b : pipeline.blocks) {
      w.u8(static_cast<std::uint8_t>(b.band));
      w.i32(b.order);
      w.u64(b.input_dim);
      w.u64(b.offset);
      w.u64(b.length);
      w.u8(b.has_pca ? 1 : 0);
      if (b.has_pca) write_pca(w, b.pca);
    }
    write_section(out, kPipeline, buf.str());
  }
  {
    std::ostringstream buf;
    serialize::Writer w(buf);
    w.f64_vec(dft_losses);
    w.u32_vec(selected);
    write_section(out, kDft, buf.str());
  }
  {
    std::ostringstream buf;
    serialize::Writer w(buf);
    w.i32(model.n_classes);
    w.u64(model.feature_dim);
    w.f64(model.learning_rate);
    w.f64(model.base_score);
    w.u64(model.forests.size());
    for (const auto& forest : model.forests) {
      w.u64(forest.size());
      for (const gbdt::Tree& tree : forest) {
        w.u64(tree.nodes.size());
        for (const gbdt::TreeNode& nd : tree.nodes) {
          w.i32(nd.feature);
          w.f64(nd.threshold);
          w.i32(nd.left);
          w.i32(nd.right);
          w.f64(nd.value);
        }
      }
    }
    write_section(out, kModel, buf.str());
  }
  {
    std::ostringstream buf;
    serialize::Writer w(buf);
    w.str(config_text);
    w.u64(fingerprint);
    write_section(out, kConfig, buf.str());
  }
}

void ModelArchive::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error::bad_input("cannot write archive: " + tmp);
    save_stream(out);
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw Error::internal("archive write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error::internal("cannot move archive into place: " + path);
  }
}

ModelArchive ModelArchive::load_stream(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string_view(magic, 4) != std::string_view(kMagic, 4)) {
    throw Error::bad_input("archive: bad magic (not a model archive)");
  }
  serialize::Reader header(in);
  const std::uint32_t version = header.u32();
  if (version != kVersion) {
    throw Error::bad_input("archive: unsupported format version " +
                           std::to_string(version) + " (expected " +
                           std::to_string(kVersion) + ")");
  }

  ModelArchive a;
  {
    std::istringstream buf(read_section(in, kTagset));
    serialize::Reader r(buf);
    const std::uint64_t count = r.u64();
    std::vector<std::string> symbols(count);
    for (auto& s : symbols) s = r.str();
    a.tagset = TagSet(std::move(symbols));
  }
  {
    std::istringstream buf(read_section(in, kProfile));
    serialize::Reader r(buf);
    a.profile.avg_nsc = r.f64_vec();
    a.profile.sorted_order = r.u32_vec();
  }
  {
    std::istringstream buf(read_section(in, kPipeline));
    serialize::Reader r(buf);
    a.pipeline.partition.low = r.u32_vec();
    a.pipeline.partition.mid = r.u32_vec();
    a.pipeline.partition.high = r.u32_vec();
    a.pipeline.partition.cut_low = r.u32();
    a.pipeline.partition.cut_high = r.u32();
    a.pipeline.config.mid_orders.resize(r.u64());
    for (int& n : a.pipeline.config.mid_orders) n = r.i32();
    a.pipeline.config.high_orders.resize(r.u64());
    for (int& n : a.pipeline.config.high_orders) n = r.i32();
    a.pipeline.config.pca_on_unigrams = r.u8() != 0;
    a.pipeline.config.energy_threshold = r.f64();
    a.pipeline.config.max_pca_samples = r.u64();
    a.pipeline.embedding_dim = r.u64();
    a.pipeline.output_dim = r.u64();
    a.pipeline.blocks.resize(r.u64());
    for (feature_pipeline::Block& b : a.pipeline.blocks) {
      b.band = static_cast<feature_pipeline::Band>(r.u8());
      b.order = r.i32();
      b.input_dim = r.u64();
      b.offset = r.u64();
      b.length = r.u64();
      b.has_pca = r.u8() != 0;
      if (b.has_pca) b.pca = read_pca(r);
    }
  }
  {
    std::istringstream buf(read_section(in, kDft));
    serialize::Reader r(buf);
    a.dft_losses = r.f64_vec();
    a.selected = r.u32_vec();
  }
  {
    std::istringstream buf(read_section(in, kModel));
    serialize::Reader r(buf);
    a.model.n_classes = r.i32();
    a.model.feature_dim = r.u64();
    a.model.learning_rate = r.f64();
    a.model.base_score = r.f64();
    a.model.forests.resize(r.u64());
    for (auto& forest : a.model.forests) {
      forest.resize(r.u64());
      for (gbdt::Tree& tree : forest) {
        tree.nodes.resize(r.u64());
        for (gbdt::TreeNode& nd : tree.nodes) {
          nd.feature = r.i32();
          nd.threshold = r.f64();
          nd.left = r.i32();
          nd.right = r.i32();
          nd.value = r.f64();
        }
      }
    }
  }
  {
    std::istringstream buf(read_section(in, kConfig));
    serialize::Reader r(buf);
    a.config_text = r.str();
    a.fingerprint = r.u64();
  }
  return a;
}

ModelArchive ModelArchive::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error::bad_input("cannot open archive: " + path);
  return load_stream(in);
}

std::vector<double> ModelArchive::features_for_token(
    const EmbeddedSentence& sentence, std::size_t m) const {
  const std::vector<double> full = pipeline.transform_token(sentence, m);
  std::vector<double> out(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) out[i] = full[selected[i]];
  return out;
}

}  // namespace gwpt::archive
