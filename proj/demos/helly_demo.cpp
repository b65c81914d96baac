// Extract an epsilon-clustered subfamily from the power functions t -> t^n.

#include <iostream>

#include "ordnung/gallery.hpp"
#include "ordnung/selection.hpp"

int main() {
    std::vector<double> grid;
    for (int i = 0; i <= 16; ++i) grid.push_back(i / 16.0);
    const auto family = ordnung::gen_helly_powers(60, grid);

    const double epsilon = 0.25;
    const auto sel = ordnung::select_monotone(family, epsilon);

    std::cout << "members: " << family.size() << ", selected: " << sel.selected.size()
              << " (pairwise within " << epsilon << " at every grid point)\n";
    std::cout << "first survivors:";
    for (std::size_t i = 0; i < sel.selected.size() && i < 8; ++i)
        std::cout << " t^" << sel.selected[i] + 1;
    std::cout << "\n";
    return 0;
}
