#include "resim/cpr.hpp"

namespace resim {

void CprFpf::setup(const BlockMatrix& a, const CprConfig& config, const Partition& part) {
  a_ = &a;
  part_ = part;
  fine_.setup(a, config.ilu_subdomains, part.workers);
  amg_.setup(a.pressure_block(), config.amg);
}

void CprFpf::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  const int m = a_->block_size();
  const Index ncell = a_->cell_count();
  Eigen::VectorXd az;
  Eigen::VectorXd correction;

  fine_.apply(r, z, part_.workers);

  a_->multiply(z, az, part_);
  const Eigen::VectorXd res = r - az;
  Eigen::VectorXd rp(ncell);
  for (Index c = 0; c < ncell; ++c) rp(c) = res(c * m);
  Eigen::VectorXd zp;
  amg_.vcycle(rp, zp, part_.workers);
  for (Index c = 0; c < ncell; ++c) z(c * m) += zp(c);

  a_->multiply(z, az, part_);
  fine_.apply(r - az, correction, part_.workers);
  z += correction;
}

}  // namespace resim
