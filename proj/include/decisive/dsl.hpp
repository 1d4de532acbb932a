#pragma once

#include <string>
#include <string_view>

#include "decisive/model.hpp"

namespace decisive {

struct ModelFile {
    std::string header = "pcm";  // pcm | ppn | phm; the latter two are checked
    Model model;
};

// Model text:
//   pcm {
//     states q;
//     counters c;
//     opaque f = hilbert[x1](x1^2 - 2);
//     inc: q --[pre=(1), post=(2)]--> q weight @f;
//     dec: q --[pre=(1), post=(0)]--> q weight c + 1;
//     z:   q --[zero(c), post=(1)]--> q weight 1;
//     init q (5);
//     target zero;            // or: finite q (0), ...  /  upward q (1), ...
//   }
ModelFile parse_model(std::string_view text);

std::string print_model(const ModelFile& file);

}  // namespace decisive
