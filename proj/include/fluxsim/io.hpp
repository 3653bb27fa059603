#pragma once

// CSV input/output and number formatting. Machine files carry 17 significant
// digits; human tables round to 4.

#include <string>
#include <vector>

namespace fluxsim {

std::string fmt17(double v);
std::string fmt4(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

double csv_number(const CsvTable& table, size_t row, int col);

}  // namespace fluxsim
