#include <iostream>

int main() {
  std::cout << "electlab\n";
  return 0;
}
