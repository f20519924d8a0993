#pragma once

#include "cbpre/group/p256_group.hpp"
#include "cbpre/pre/codec.hpp"
#include "cbpre/pre/scheme.hpp"

namespace cbpre::pre {

// Instantiations over the production curve, used by the ledger, the storage
// proxy and the simulated actors.
using ProdGroup = group::P256Group;
using ProdParams = PublicParams<ProdGroup>;
using ProdMasterSecret = MasterSecret<ProdGroup>;
using ProdKeyPair = KeyPair<ProdGroup>;
using ProdCertificate = Certificate<ProdGroup>;
using ProdCiphertext = Ciphertext<ProdGroup>;
using ProdReEncCiphertext = ReEncCiphertext<ProdGroup>;

}  // namespace cbpre::pre
