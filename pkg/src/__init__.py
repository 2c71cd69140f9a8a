# princrep: minimal representations of finite distributive lattices
